#include <benchmark/benchmark.h>

#include <lrt/lrt.hpp>

namespace {

lrt::PointSet uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  lrt::RandomStream stream(seed, 7);
  lrt::Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = stream.uniform01();
  }
  return lrt::PointSet(std::move(x));
}

std::size_t arg(const benchmark::State& state) { return static_cast<std::size_t>(state.range(0)); }

void BM_KernelMatrix(benchmark::State& state) {
  const auto points = uniform_points(arg(state), 4, 1);
  const lrt::KernelSpec kernel = lrt::GaussianKernel{1.0};
  for (auto _ : state) benchmark::DoNotOptimize(lrt::kernel_matrix(kernel, points));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelMatrix)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_KhHalve(benchmark::State& state) {
  const auto points = uniform_points(arg(state), 4, 2);
  const lrt::KernelOracle oracle(lrt::GaussianKernel{1.0}, points);
  const auto all = lrt::iota_indices(points.size());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    lrt::RandomStream stream(seed++);
    benchmark::DoNotOptimize(lrt::kh_halve(oracle, all, 0.5, stream));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KhHalve)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_KhCompress(benchmark::State& state) {
  const auto points = uniform_points(arg(state), 4, 3);
  const lrt::KernelOracle oracle(lrt::GaussianKernel{1.0}, points);
  const auto all = lrt::iota_indices(points.size());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    lrt::RandomStream stream(seed++);
    benchmark::DoNotOptimize(lrt::kh_compress(oracle, all, 0.5, 2, stream));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KhCompress)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void gs_walk_bench(benchmark::State& state, lrt::GsImpl impl) {
  const auto points = uniform_points(arg(state), 3, 4);
  const lrt::KernelOracle oracle(lrt::GaussianKernel{1.0}, points);
  const lrt::Matrix Q = lrt::paired_difference_matrix(oracle, lrt::iota_indices(points.size()));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    lrt::RandomStream stream(seed++);
    benchmark::DoNotOptimize(lrt::kernel_gs_walk(Q, stream, impl));
  }
  state.SetComplexityN(state.range(0));
}

void BM_GsWalkCubic(benchmark::State& state) { gs_walk_bench(state, lrt::GsImpl::cubic); }
void BM_GsWalkQuartic(benchmark::State& state) { gs_walk_bench(state, lrt::GsImpl::quartic); }
BENCHMARK(BM_GsWalkCubic)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNCubed);
BENCHMARK(BM_GsWalkQuartic)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_LkhHalve(benchmark::State& state) {
  const auto points = uniform_points(arg(state), 16, 5);
  const auto all = lrt::iota_indices(points.size());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    lrt::RandomStream stream(seed++);
    benchmark::DoNotOptimize(lrt::lkh_halve(points, all, 0.5, stream));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LkhHalve)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
