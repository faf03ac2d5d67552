#include <benchmark/benchmark.h>

#include "ritznet/analysis.hpp"
#include "ritznet/constructor.hpp"
#include "ritznet/rng.hpp"

using namespace ritznet;

namespace {

ShallowNet bench_net(int width, int dim, int order) {
  return init_network(width, dim, 2.0, order, 12345);
}

void BM_NetValue(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const ShallowNet net = bench_net(width, 2, 1);
  Eigen::VectorXd x(2);
  x << 0.37, 0.61;
  for (auto _ : state) benchmark::DoNotOptimize(net.value(x));
}
BENCHMARK(BM_NetValue)->Arg(8)->Arg(32)->Arg(128);

void BM_NetBackprop(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const ShallowNet net = bench_net(width, 2, 2);
  Eigen::VectorXd x(2), cg(2);
  x << 0.37, 0.61;
  cg << 0.5, -0.25;
  Eigen::MatrixXd ch = Eigen::MatrixXd::Identity(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(net.backprop(x, 1.0, cg, &ch));
}
BENCHMARK(BM_NetBackprop)->Arg(8)->Arg(32)->Arg(128);

void BM_ProjectL1(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(7);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = rng.uniform(-2.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1_ball(v, 1.0));
}
BENCHMARK(BM_ProjectL1)->Arg(32)->Arg(256)->Arg(2048);

void BM_PoissonLossGradient(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PdeProblem problem = make_poisson(Eigen::VectorXi::Constant(2, 1));
  const SampleBatch batch = sample_interior(Hypercube(2), n, 99);
  const ShallowNet net = bench_net(16, 2, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        loss_gradient(LossKind::drm_poisson, net, batch, nullptr, problem));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PoissonLossGradient)->Arg(256)->Arg(1024)->Arg(4096);

void BM_TensorQuadrature(benchmark::State& state) {
  const Hypercube cube(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(tensor_quadrature(cube, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TensorQuadrature)->Arg(6)->Arg(12);

void BM_ReluInterpolant(benchmark::State& state) {
  const Curve1D curve([](double z) { return std::cos(z); },
                      [](double z) { return -std::sin(z); },
                      [](double z) { return -std::cos(z); }, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(relu_interpolant(curve, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ReluInterpolant)->Arg(16)->Arg(128);

void BM_EmpiricalCovering(benchmark::State& state) {
  Rng rng(5);
  const SampleBatch batch = sample_interior(Hypercube(2), 128, 3);
  std::vector<ShallowNet> sample;
  for (int i = 0; i < 256; ++i) sample.push_back(init_network(4, 2, 1.0, 1, rng.next_u64()));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_covering(sample, batch, 0.05));
}
BENCHMARK(BM_EmpiricalCovering);

}  // namespace

BENCHMARK_MAIN();
