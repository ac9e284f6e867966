#include <benchmark/benchmark.h>

#include <random>

#include "djopt/encodings.hpp"
#include "djopt/lp.hpp"
#include "djopt/optimality.hpp"

using namespace djopt;

namespace {

LpProblem random_lp(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::uniform_int_distribution<int> coef(-5, 5);
  LpProblem p = LpProblem::feasibility(n);
  p.sense = Sense::Max;
  for (Eigen::Index j = 0; j < n; ++j) p.c(j) = coef(rng);
  p.A_ineq = Mat(m + 2 * n, n);
  p.b_ineq = Vec(m + 2 * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p.A_ineq(i, j) = coef(rng);
    p.b_ineq(i) = 5 + std::abs(coef(rng));
  }
  p.A_ineq.bottomRows(2 * n) << Mat::Identity(n, n), -Mat::Identity(n, n);
  p.b_ineq.tail(2 * n).setConstant(10);
  p.A_eq = Mat(0, n);
  p.b_eq = Vec(0);
  return p;
}

void BM_Simplex(benchmark::State& st) {
  std::mt19937_64 rng(1);
  std::vector<LpProblem> lps;
  for (int i = 0; i < 32; ++i) lps.push_back(random_lp(rng, st.range(0), 2 * st.range(0)));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve_lp(lps[k++ % lps.size()]).value);
}
BENCHMARK(BM_Simplex)->Arg(3)->Arg(6)->Arg(10);

void BM_Generators(benchmark::State& st) {
  EncodingSpec s;
  s.kind = EncodingKind::MPCC;
  s.pairs = static_cast<int>(st.range(0));
  const PolyhedralSet D = build(s);
  const PolyhedralCone T = tangent_cone(D, Vec::Zero(D.dim));
  for (auto _ : st)
    for (const auto& P : T.pieces) benchmark::DoNotOptimize(generators(P).rays.size());
}
BENCHMARK(BM_Generators)->Arg(1)->Arg(2)->Arg(3);

void BM_CompareCones(benchmark::State& st) {
  EncodingSpec s;
  s.kind = EncodingKind::Switching;
  s.pairs = 2;
  const PolyhedralSet D = build(s);
  const PolyhedralCone T = tangent_cone(D, Vec::Zero(D.dim));
  const auto probes = cone_probes(T, T, 1000, 7);
  const bool parallel = st.range(0) != 0;
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel ? compare_cones(T, T, probes).disagreements
                                      : compare_cones_serial(T, T, probes).disagreements);
}
BENCHMARK(BM_CompareCones)->Arg(0)->Arg(1);

void BM_EssentialMin(benchmark::State& st) {
  EncodingSpec s;
  s.kind = EncodingKind::MPCC;
  s.pairs = 1;
  const ProblemPoint pp = make_problem(parse("x1^2 + x2^2"), {parse("x1"), parse("x2")}, build(s), Vec::Zero(2));
  const bool parallel = st.range(0) != 0;
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel ? essential_min_oracle(pp, 0.5, 1e-2, 10000).holds
                                      : essential_min_oracle_serial(pp, 0.5, 1e-2, 10000).holds);
}
BENCHMARK(BM_EssentialMin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SufficientCheck(benchmark::State& st) {
  EncodingSpec s;
  s.kind = EncodingKind::Switching;
  s.pairs = 1;
  const ProblemPoint pp = make_problem(parse("x1^2 + x2^2 - 3*x1*x2"), {parse("x1 + x2^2"), parse("x2 + x1^2")},
                                       build(s), Vec::Zero(2));
  for (auto _ : st) benchmark::DoNotOptimize(sufficient_check(pp).verdict);
}
BENCHMARK(BM_SufficientCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
