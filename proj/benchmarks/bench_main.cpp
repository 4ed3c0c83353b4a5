#include <benchmark/benchmark.h>

#include <cmath>

#include "lrsplit/krylov.hpp"
#include "lrsplit/preconditioner.hpp"
#include "lrsplit/problems.hpp"
#include "lrsplit/sparse.hpp"

using namespace lrsplit;

namespace {

Instance oseen(std::size_t grid) {
  ProblemSpec spec;
  spec.kind = ProblemKind::OseenMac;
  spec.nx = spec.ny = grid;
  spec.nu = 0.01;
  return build_instance(spec, 100.0);
}

void BM_Spmv(benchmark::State& state) {
  const Instance inst = oseen(static_cast<std::size_t>(state.range(0)));
  const CsrMatrix& a = inst.op.a();
  for (auto _ : state) benchmark::DoNotOptimize(spmv(a, inst.b));
  state.counters["nnz"] = static_cast<double>(a.nnz());
}
BENCHMARK(BM_Spmv)->Arg(16)->Arg(32)->Arg(64);

void BM_OperatorApply(benchmark::State& state) {
  const Instance inst = oseen(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inst.op.apply(inst.b));
}
BENCHMARK(BM_OperatorApply)->Arg(16)->Arg(32)->Arg(64);

// dense vs sparse K path
void BM_SmwApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const LowRankProblem p = gen_random_spd_lowrank(n, k, 100.0, 3);
  const SmwSolver s = build_smw(TallMatrix(p.u), 0.5, 10.0);
  const Vector r = random_rhs(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(s.apply(r));
}
BENCHMARK(BM_SmwApply)->Args({2000, 8})->Args({2000, 64})->Args({4000, 256});

void BM_ProductSetup(benchmark::State& state) {
  const Instance inst = oseen(static_cast<std::size_t>(state.range(0)));
  const auto mode = state.range(1) != 0 ? FactorMode::Inexact : FactorMode::Exact;
  for (auto _ : state) benchmark::DoNotOptimize(build_product(inst.op, 0.01, mode));
}
BENCHMARK(BM_ProductSetup)->Args({32, 0})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_GmresOseen(benchmark::State& state) {
  const Instance inst = oseen(static_cast<std::size_t>(state.range(0)));
  const PreconditionerPtr p = build_product(inst.op, 0.014, FactorMode::Inexact);
  SolveOptions opts;
  opts.restart = 30;
  std::size_t its = 0;
  for (auto _ : state) {
    const SolveResult res = gmres_right(inst.op, inst.b, *p, opts);
    its = res.report.iterations;
  }
  state.counters["iterations"] = static_cast<double>(its);
}
BENCHMARK(BM_GmresOseen)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
