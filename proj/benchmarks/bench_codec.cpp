#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include <salpcc/entropy.hpp>
#include <salpcc/knn_graph.hpp>
#include <salpcc/pipeline.hpp>
#include <salpcc/reconstruction.hpp>

namespace {

using namespace salpcc;

// Noisy sphere shell, scaled to a 1024 grid.
PointCloud shell(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  PointCloud pc;
  pc.vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 v(g(rng), g(rng), g(rng));
    v = v.normalized() * (400.0 + 4.0 * g(rng)) + Vec3(512, 512, 512);
    pc.vertices.push_back(v);
  }
  return pc;
}

void BM_KnnGraph(benchmark::State& state) {
  const PointCloud pc = shell(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_knn_graph(pc, 6));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KnnGraph)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ArithmeticEncode(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::geometric_distribution<int> geo(0.3);
  std::vector<std::uint8_t> bytes(1 << 20);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(std::min(geo(rng), 255));
  for (auto _ : state) benchmark::DoNotOptimize(arithmetic_encode(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_ArithmeticEncode)->Unit(benchmark::kMillisecond);

void BM_ArithmeticDecode(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::geometric_distribution<int> geo(0.3);
  std::vector<std::uint8_t> bytes(1 << 20);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(std::min(geo(rng), 255));
  const auto coded = arithmetic_encode(bytes);
  for (auto _ : state) benchmark::DoNotOptimize(arithmetic_decode(coded, bytes.size()));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_ArithmeticDecode)->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const PointCloud pc = shell(static_cast<std::size_t>(state.range(0)));
  const CodecConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(encode(analyze(pc, cfg), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Encode)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const PointCloud pc = shell(static_cast<std::size_t>(state.range(0)));
  CodecConfig cfg;
  const auto bytes = encode(analyze(pc, cfg), cfg).stream.bytes;
  SolverOptions opt = solver_options(cfg);
  opt.backend = static_cast<SolverBackend>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(decode(bytes, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Reconstruct)
    ->Args({10000, static_cast<int>(SolverBackend::kDirect)})
    ->Args({10000, static_cast<int>(SolverBackend::kIterative)})
    ->Args({100000, static_cast<int>(SolverBackend::kDirect)})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
