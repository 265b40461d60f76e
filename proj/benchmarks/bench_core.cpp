#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "circlepat/curvature.hpp"
#include "circlepat/feasibility.hpp"
#include "circlepat/solve.hpp"

using namespace circlepat;

namespace {

struct Problem {
  Pattern pattern;
  Eigen::VectorXd u;
  Eigen::VectorXd khat;
};

Problem make_problem(int side) {
  std::mt19937_64 rng(side);
  std::uniform_real_distribution<double> th(0.3, 2.5), uu(-3.0, -0.2);
  const PatternComplex cx = builtin_torus_grid(side, side);
  std::vector<double> theta(cx.edge_count());
  for (double& t : theta) t = th(rng);
  Pattern p(cx, PatternType::type_110(), theta);
  Eigen::VectorXd u(p.face_count());
  for (auto& x : u) x = uu(rng);
  Eigen::VectorXd khat = curvature_vector(p, u);
  return {std::move(p), u, khat};
}

void BM_Curvature(benchmark::State& state) {
  const Problem pr = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_vector(pr.pattern, pr.u));
  state.SetComplexityN(pr.pattern.face_count());
}
BENCHMARK(BM_Curvature)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_Laplacian(benchmark::State& state) {
  const Problem pr = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(pr.pattern, pr.u));
}
BENCHMARK(BM_Laplacian)->RangeMultiplier(2)->Range(4, 64);

void BM_LaplaceSolve(benchmark::State& state) {
  const Problem pr = make_problem(static_cast<int>(state.range(0)));
  const LaplaceMatrix lap = laplacian(pr.pattern, pr.u);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(pr.pattern.face_count());
  for (auto _ : state) benchmark::DoNotOptimize(lap.solve(rhs));
}
BENCHMARK(BM_LaplaceSolve)->RangeMultiplier(2)->Range(4, 64);

void BM_Newton(benchmark::State& state) {
  const Problem pr = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_newton(pr.pattern, pr.khat));
}
BENCHMARK(BM_Newton)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

void BM_Flow(benchmark::State& state) {
  const Problem pr = make_problem(6);
  const FlowOptions opts{.method = state.range(0) ? FlowMethod::Calabi : FlowMethod::Ricci,
                         .t_max = 400.0,
                         .tol_residual = 1e-8};
  const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(pr.pattern.face_count(), -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_flow(pr.pattern, pr.khat, u0, opts));
  state.SetLabel(state.range(0) ? "calabi" : "ricci");
}
BENCHMARK(BM_Flow)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MaxFlow(benchmark::State& state) {
  const Problem pr = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_maxflow(pr.pattern.complex(), pr.khat));
}
BENCHMARK(BM_MaxFlow)->RangeMultiplier(2)->Range(4, 32);

void BM_Exhaustive(benchmark::State& state) {
  const int faces = static_cast<int>(state.range(0));
  const PatternComplex cx = builtin_torus_grid(faces, 1);
  const Eigen::VectorXd khat = Eigen::VectorXd::Constant(faces, 2 * std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(check_exhaustive(cx, khat));
}
BENCHMARK(BM_Exhaustive)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
