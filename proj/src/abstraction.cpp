#include "seer/abstraction.hpp"

#include <algorithm>

#include "seer/error.hpp"
#include "seer/kernels.hpp"

namespace seer {

Matrix HarvestedStates::rows_of(std::size_t instance) const {
  const std::size_t begin = offsets.at(instance);
  const std::size_t end =
      instance + 1 < offsets.size() ? offsets[instance + 1] : static_cast<std::size_t>(rows.rows());
  return rows.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
}

HarvestedStates harvest_hidden_states(const ModelBundle& model,
                                      std::span<const std::vector<int>> corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyDataset, "cannot harvest from an empty corpus");
  kernels::HiddenRows hidden = kernels::parallel::harvest(model, corpus);
  hidden.offsets.pop_back();
  return HarvestedStates{std::move(hidden.rows), std::move(hidden.offsets)};
}

HarvestedStates harvest_hidden_states(const ModelBundle& model, std::span<const std::string> texts) {
  std::vector<std::vector<int>> corpus;
  corpus.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      corpus.push_back(tokenize(texts[i], model.vocab));
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + std::to_string(i) + ": " + e.detail());
    }
  }
  return harvest_hidden_states(model, corpus);
}

AbstractionModel::AbstractionModel(PcaModel pca, GmmModel gmm)
    : pca_(std::move(pca)), gmm_(std::move(gmm)) {
  if (gmm_.dim() != pca_.output_dim()) {
    throw Error(ErrorCode::BadDimension, "mixture dimension differs from the PCA dimension");
  }
  scorer_ = std::make_shared<const GmmScorer>(gmm_);
}

int AbstractionModel::assign(const Vector& hidden) const {
  return scorer_->assign(pca_transform(pca_, hidden));
}

int default_pca_dim(int hidden_dim) { return std::min(kDefaultPcaDim, hidden_dim); }

AbstractionModel fit_abstraction(const ModelBundle& model, std::span<const std::vector<int>> corpus,
                                 int k, int n, std::uint64_t seed, const GmmOptions& options) {
  if (k == 0) k = default_pca_dim(model.hidden_dim());
  const HarvestedStates harvested = harvest_hidden_states(model, corpus);
  PcaModel pca = fit_pca(harvested.rows, k);
  GmmModel gmm = fit_gmm(pca_transform(pca, harvested.rows), n, seed, options);
  return AbstractionModel(std::move(pca), std::move(gmm));
}

AbstractionModel fit_abstraction(const ModelBundle& model, std::span<const std::string> texts,
                                 int k, int n, std::uint64_t seed, const GmmOptions& options) {
  std::vector<std::vector<int>> corpus;
  corpus.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      corpus.push_back(tokenize(texts[i], model.vocab));
    } catch (const Error& e) {
      throw Error(e.code(), "instance " + std::to_string(i) + ": " + e.detail());
    }
  }
  return fit_abstraction(model, corpus, k, n, seed, options);
}

StateTrace encode_trace(const AbstractionModel& abstraction, const HiddenTrace& trace) {
  StateTrace states;
  states.reserve(trace.hidden.size());
  for (const Vector& h : trace.hidden) {
    if (h.size() != abstraction.hidden_dim()) {
      throw Error(ErrorCode::BadDimension, "hidden vector dimension " + std::to_string(h.size()) +
                                               " does not match the abstraction (" +
                                               std::to_string(abstraction.hidden_dim()) + ")");
    }
    states.push_back(abstraction.assign(h));
  }
  return states;
}

json abstraction_to_json(const AbstractionModel& a) {
  json covs = json::array();
  for (const Matrix& c : a.gmm().covariances) covs.push_back(matrix_to_json(c));
  return json{{"version", kAbstractionVersion},
              {"k", a.pca_dim()},
              {"n", a.n_states()},
              {"seed", a.gmm().seed},
              {"pca",
               {{"mean", vector_to_json(a.pca().mean)},
                {"components", matrix_to_json(a.pca().components)},
                {"explained_variance", vector_to_json(a.pca().explained_variance)}}},
              {"gmm",
               {{"weights", vector_to_json(a.gmm().weights)},
                {"means", matrix_to_json(a.gmm().means)},
                {"covariances", std::move(covs)}}}};
}

AbstractionModel abstraction_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("version", std::string()) != kAbstractionVersion) {
      throw Error(ErrorCode::VersionMismatch, "unsupported abstraction version");
    }
    const int k = j.at("k").get<int>();
    const int n = j.at("n").get<int>();
    if (k < 1 || n < 1) throw Error(ErrorCode::BadModelFile, "k and n must be positive");
    const json& p = j.at("pca");
    const Eigen::Index d = static_cast<Eigen::Index>(p.at("mean").size());
    PcaModel pca;
    pca.mean = vector_from_json(p.at("mean"), d, "pca.mean");
    pca.components = matrix_from_json(p.at("components"), k, d, "pca.components");
    pca.explained_variance = vector_from_json(p.at("explained_variance"), k, "pca.explained_variance");
    const json& g = j.at("gmm");
    GmmModel gmm;
    gmm.seed = j.at("seed").get<std::uint64_t>();
    gmm.weights = vector_from_json(g.at("weights"), n, "gmm.weights");
    gmm.means = matrix_from_json(g.at("means"), n, k, "gmm.means");
    const json& covs = g.at("covariances");
    if (!covs.is_array() || static_cast<int>(covs.size()) != n) {
      throw Error(ErrorCode::BadModelFile, "gmm.covariances must have n entries");
    }
    for (const json& c : covs) gmm.covariances.push_back(matrix_from_json(c, k, k, "gmm.covariances"));
    return AbstractionModel(std::move(pca), std::move(gmm));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadModelFile, std::string("abstraction: ") + e.what());
  }
}

}  // namespace seer
