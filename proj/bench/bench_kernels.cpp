// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "seer/gmm.hpp"
#include "seer/kernels.hpp"
#include "seer/random.hpp"
#include "seer/synthetic.hpp"
#include "seer/vocabulary.hpp"

namespace {

using namespace seer;

struct Mixture {
  Matrix data;
  Matrix resp;
  GmmModel gmm;
};

const Mixture& mixture() {
  static const Mixture m = [] {
    Rng rng(3);
    Matrix x(20000, 10);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal() + static_cast<double>(i % 5) * 3.0;
    Mixture out;
    out.gmm = fit_gmm(x.topRows(2000), 40, 1);
    out.data = std::move(x);
    const Matrix lj = kernels::parallel::log_joint(GmmScorer(out.gmm), out.data);
    out.resp = (lj.colwise() - lj.rowwise().maxCoeff()).array().exp();
    out.resp = out.resp.array().colwise() / out.resp.rowwise().sum().array();
    return out;
  }();
  return m;
}

struct Corpus {
  ModelBundle model;
  std::vector<std::vector<int>> ids;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    SyntheticOptions opts;
    opts.train = 4000;
    opts.test = 0;
    std::vector<std::string> texts;
    for (const LabeledText& r : make_sentiment_corpus(opts)) texts.push_back(r.text);
    Corpus out;
    out.model = init_model(build_vocabulary(texts, 500), 16, 64, {"negative", "positive"}, 5);
    for (const std::string& t : texts) out.ids.push_back(tokenize(t, out.model.vocab));
    return out;
  }();
  return c;
}

template <Matrix (*Fn)(const GmmScorer&, const Matrix&)>
void BM_log_joint(benchmark::State& state) {
  const GmmScorer scorer(mixture().gmm);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(scorer, mixture().data));
}

template <kernels::MixtureStats (*Fn)(const Matrix&, const Matrix&, double)>
void BM_maximization(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(mixture().data, mixture().resp, 1e-6));
}

template <kernels::HiddenRows (*Fn)(const ModelBundle&, std::span<const std::vector<int>>)>
void BM_harvest(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(corpus().model, corpus().ids));
}

template <std::vector<int> (*Fn)(const GmmScorer&, const Matrix&)>
void BM_assign_rows(benchmark::State& state) {
  const GmmScorer scorer(mixture().gmm);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(scorer, mixture().data));
}

BENCHMARK(BM_log_joint<kernels::serial::log_joint>)->Name("log_joint/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_joint<kernels::parallel::log_joint>)->Name("log_joint/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximization<kernels::serial::maximization>)->Name("maximization/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximization<kernels::parallel::maximization>)->Name("maximization/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_harvest<kernels::serial::harvest>)->Name("harvest/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_harvest<kernels::parallel::harvest>)->Name("harvest/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_rows<kernels::serial::assign_rows>)->Name("assign_rows/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_rows<kernels::parallel::assign_rows>)->Name("assign_rows/parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
