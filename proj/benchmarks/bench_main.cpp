#include <benchmark/benchmark.h>

#include <random>

#include "cnorm/experiment.hpp"
#include "cnorm/generator.hpp"
#include "cnorm/phase1.hpp"
#include "cnorm/phase2.hpp"
#include "cnorm/regress.hpp"

using namespace cnorm;

namespace {

const LabeledDataset& paper_dataset() {
  static const LabeledDataset ds = generate_dataset(GeneratorConfig::paper_shaped(1994));
  return ds;
}

const SwapSplit& paper_split() {
  static const SwapSplit s = make_swap_split(paper_dataset());
  return s;
}

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

void BM_Similarity(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = gaussian(state.range(0), rng), b = gaussian(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(similarity(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Similarity)->Arg(5)->Arg(20)->Arg(200);

void BM_ClassifyIbl(benchmark::State& state) {
  std::mt19937_64 rng(2);
  TrainingSet t;
  t.class_count = 8;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    t.vectors.push_back(gaussian(20, rng));
    t.labels.push_back(static_cast<ClassId>(i % 8));
  }
  const auto clf = train_ibl(std::move(t), static_cast<std::size_t>(state.range(1)));
  const auto q = gaussian(20, rng);
  for (auto _ : state) benchmark::DoNotOptimize(classify_ibl(clf, q).label);
}
BENCHMARK(BM_ClassifyIbl)->Args({121, 1})->Args({121, 5})->Args({2000, 5});

void BM_Stepwise(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), cols = 5;
  Design x(rows, cols);
  std::vector<double> y(rows);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = g(rng);
    y[r] = 2.0 * x(r, 0) - x(r, 3) + 0.5 * g(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(stepwise_select(x, y, 4.0).intercept);
}
BENCHMARK(BM_Stepwise)->Arg(16)->Arg(121)->Arg(1000);

void BM_FitNormalizer(benchmark::State& state) {
  const auto method = static_cast<NormMethod>(state.range(0));
  NormalizerParams p;
  p.missing = MissingPolicy::DClamp;
  p.d = method == NormMethod::MlrContextual ? 15.0 : 50.0;
  const auto& train = paper_split().split.first;
  for (auto _ : state) benchmark::DoNotOptimize(fit_normalizer(method, train, p).floored.size());
}
BENCHMARK(BM_FitNormalizer)->Arg(5)->Arg(6)->Arg(7);

void BM_NormalizeDataset(benchmark::State& state) {
  const auto method = static_cast<NormMethod>(state.range(0));
  NormalizerParams p;
  p.d = method == NormMethod::MlrContextual ? 15.0 : 50.0;
  const auto norm = fit_normalizer(method, paper_split().split.first, p);
  for (auto _ : state)
    for (const auto& o : paper_dataset().observations()) benchmark::DoNotOptimize(normalize(norm, o).data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paper_dataset().size()));
}
BENCHMARK(BM_NormalizeDataset)->Arg(6)->Arg(7);

void BM_SwapEvaluate(benchmark::State& state) {
  const auto cfg = state.range(0) ? PipelineConfig::cnmlr() : PipelineConfig::cnibl();
  for (auto _ : state) benchmark::DoNotOptimize(swap_evaluate(paper_split(), cfg).raw);
}
BENCHMARK(BM_SwapEvaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ComparisonGrid(benchmark::State& state) {
  const auto cells = comparison_grid().cells();
  for (auto _ : state)
    benchmark::DoNotOptimize(factorial_experiment(paper_split(), cells, static_cast<std::size_t>(state.range(0))).size());
}
BENCHMARK(BM_ComparisonGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
