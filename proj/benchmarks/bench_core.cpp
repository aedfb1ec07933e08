#include <benchmark/benchmark.h>

#include <cstdint>

#include "dysa/oracle.hpp"
#include "dysa/problems.hpp"
#include "dysa/prox.hpp"
#include "dysa/rng.hpp"
#include "dysa/schedules.hpp"
#include "dysa/solvers.hpp"

namespace {

dysa::ProblemInstance bench_problem(int dim, dysa::OracleModel model) {
  dysa::QuadraticOptions opts;
  opts.dim = dim;
  opts.c_target = 0.5;
  opts.L_target = 2.0;
  opts.rotate = true;
  opts.model = model;
  opts.seed = 7;
  return dysa::make_random_quadratic(opts);
}

void BM_prox_step_box_l1(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  dysa::RngStream s(1);
  const dysa::Vector y = dysa::gaussian_vector(s, d);
  const dysa::Vector u = dysa::gaussian_vector(s, d);
  const auto reg = dysa::RegularizerSpec::l1(0.3);
  const auto cons = dysa::ConstraintSpec::box(-1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dysa::prox_step(reg, cons, y, u, 0.1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_prox_step_box_l1)->Arg(16)->Arg(256)->Arg(4096);

void BM_minibatch_aggregate(benchmark::State& state) {
  const auto p = bench_problem(64, dysa::OracleModel::random_matrix(0.3));
  dysa::RngStream s(2);
  const dysa::Vector x = dysa::gaussian_vector(s, 64);
  dysa::CallCounter calls = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        dysa::minibatch_gradient(p.model, p, x, state.range(0), s, calls));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_minibatch_aggregate)->Arg(1)->Arg(64)->Arg(4096)->Arg(1 << 20);

void BM_minibatch_literal(benchmark::State& state) {
  const auto p = bench_problem(64, dysa::OracleModel::random_matrix(0.3));
  dysa::RngStream s(2);
  const dysa::Vector x = dysa::gaussian_vector(s, 64);
  dysa::CallCounter calls = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        dysa::minibatch_gradient_literal(p.model, p, x, state.range(0), s, calls));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_minibatch_literal)->Arg(1)->Arg(64)->Arg(4096);

void BM_accelerated_run(benchmark::State& state) {
  const auto p = bench_problem(static_cast<int>(state.range(0)),
                               dysa::OracleModel::random_matrix(0.2));
  dysa::SmoothPolicy sp;
  sp.mu = 0.5;
  sp.a = p.L;
  sp.n0 = 1;
  sp.L = p.L;
  dysa::RunOptions opt;
  opt.iterations = 30;
  std::uint32_t rep = 0;
  for (auto _ : state) {
    dysa::RngStream s = dysa::RngStream(5).child(rep++);
    benchmark::DoNotOptimize(dysa::run_accelerated(p, p.model, sp, opt, s));
  }
}
BENCHMARK(BM_accelerated_run)->Arg(16)->Arg(128);

void BM_momentum_sequence(benchmark::State& state) {
  for (auto _ : state) {
    dysa::MomentumSequence seq(dysa::BetaVariant::exact);
    for (int t = 0; t < 1000; ++t) seq.advance();
    benchmark::DoNotOptimize(seq.beta());
  }
}
BENCHMARK(BM_momentum_sequence);

}  // namespace
