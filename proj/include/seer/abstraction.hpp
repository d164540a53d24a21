#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "seer/gmm.hpp"
#include "seer/json_util.hpp"
#include "seer/model.hpp"
#include "seer/pca.hpp"

namespace seer {

inline constexpr int kDefaultPcaDim = 20;
inline constexpr int kDefaultStates = 40;
inline constexpr const char* kAbstractionVersion = "seer-abstraction/1";

using StateTrace = std::vector<int>;

/// Hidden vectors h_1..h_l of every instance (h_0 excluded), stacked in
/// instance order. Instance i owns rows [offsets[i], offsets[i+1]) with the
/// last instance ending at rows.rows().
struct HarvestedStates {
  Matrix rows;
  std::vector<std::size_t> offsets;

  std::size_t instance_count() const { return offsets.size(); }
  Matrix rows_of(std::size_t instance) const;
};

HarvestedStates harvest_hidden_states(const ModelBundle& model,
                                      std::span<const std::vector<int>> corpus);
/// Tokenizes first; errors name the offending instance index.
HarvestedStates harvest_hidden_states(const ModelBundle& model, std::span<const std::string> texts);

/// The pair A = {P, G}: a PCA projection followed by a Gaussian mixture whose
/// components are the abstract states.
class AbstractionModel {
 public:
  AbstractionModel() = default;
  AbstractionModel(PcaModel pca, GmmModel gmm);

  const PcaModel& pca() const { return pca_; }
  const GmmModel& gmm() const { return gmm_; }
  const GmmScorer& scorer() const { return *scorer_; }
  int n_states() const { return gmm_.n_components(); }
  int pca_dim() const { return pca_.output_dim(); }
  int hidden_dim() const { return pca_.input_dim(); }

  /// Abstract state of one hidden vector. Total: every finite input gets a state.
  int assign(const Vector& hidden) const;

  friend bool operator==(const AbstractionModel& a, const AbstractionModel& b) {
    return a.pca_ == b.pca_ && a.gmm_ == b.gmm_;
  }

 private:
  PcaModel pca_;
  GmmModel gmm_;
  std::shared_ptr<const GmmScorer> scorer_;
};

/// k defaults to min(20, d_h) when 0 is passed.
int default_pca_dim(int hidden_dim);

/// harvest → PCA(k) → GMM(n, seed), in that order.
AbstractionModel fit_abstraction(const ModelBundle& model, std::span<const std::vector<int>> corpus,
                                 int k, int n, std::uint64_t seed, const GmmOptions& options = {});
AbstractionModel fit_abstraction(const ModelBundle& model, std::span<const std::string> texts,
                                 int k, int n, std::uint64_t seed, const GmmOptions& options = {});

/// states[t] = assign(h_t). Throws BadDimension if d_h does not match.
StateTrace encode_trace(const AbstractionModel& abstraction, const HiddenTrace& trace);

json abstraction_to_json(const AbstractionModel& abstraction);
AbstractionModel abstraction_from_json(const json& j);

}  // namespace seer
