#include <benchmark/benchmark.h>

#include "pph/constructions.hpp"

using namespace pph;

namespace {

const BaseRing Z = BaseRing::integers();
const BaseRing S2 = BaseRing::sqrt2();

AlgebraicReal sqrt_of(long n) {
  return AlgebraicReal::quadratic_root(RingElem(Z, 1), RingElem::zero(Z),
                                       RingElem(Z, -n),
                                       AlgebraicReal::Branch::Plus);
}

PiecewiseMap s2_bump() {
  ProjMatrix m0(RingElem::sqrt2(S2, 1, 1), RingElem::zero(S2),
                RingElem::zero(S2), RingElem::sqrt2(S2, -1, 1));
  ProjMatrix u(RingElem::one(S2), RingElem::zero(S2), RingElem::one(S2),
               RingElem::one(S2));
  ProjMatrix m = u * m0 * u.inverse();
  auto fps = m.fixed_points();
  std::vector<Piece> pieces{{fps[1].first, m, m},
                            {fps[0].first, m, ProjMatrix::identity(S2)}};
  return PiecewiseMap::from_pieces(S2, std::move(pieces));
}

void bm_algebraic_mul(benchmark::State& state) {
  AlgebraicReal x = sqrt_of(2) + AlgebraicReal::from_rational(mpq_class(1, 3));
  AlgebraicReal y = sqrt_of(5) - AlgebraicReal::from_rational(mpq_class(2, 7));
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(bm_algebraic_mul);

void bm_algebraic_compare(benchmark::State& state) {
  AlgebraicReal x = sqrt_of(2) * sqrt_of(3);
  AlgebraicReal y = sqrt_of(6) + AlgebraicReal::from_rational(
                                     mpq_class(1, 1000000));
  for (auto _ : state)
    benchmark::DoNotOptimize(AlgebraicReal::compare(x, y));
}
BENCHMARK(bm_algebraic_compare);

void bm_matrix_apply(benchmark::State& state) {
  ProjMatrix m = ProjMatrix::from_ints(Z, 2, 1, 1, 1);
  ProjPoint p = ProjPoint::affine(sqrt_of(2));
  for (auto _ : state) benchmark::DoNotOptimize(m.apply(p));
}
BENCHMARK(bm_matrix_apply);

void bm_matrix_pow(benchmark::State& state) {
  ProjMatrix m = ProjMatrix::from_ints(Z, 2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(m.pow(16));
}
BENCHMARK(bm_matrix_pow);

void bm_piecewise_compose(benchmark::State& state) {
  PiecewiseMap s = s2_bump();
  PiecewiseMap t = PiecewiseMap::global(
      ProjMatrix(RingElem::one(S2), RingElem::sqrt2(S2, 0, 1),
                 RingElem::zero(S2), RingElem::one(S2)));
  PiecewiseMap u = t * s * t.inverse();
  for (auto _ : state) benchmark::DoNotOptimize(s * u);
}
BENCHMARK(bm_piecewise_compose);

void bm_piecewise_eval(benchmark::State& state) {
  PiecewiseMap s = s2_bump();
  ProjPoint p = ProjPoint::rational(mpq_class(3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(s.eval(p));
}
BENCHMARK(bm_piecewise_eval);

void bm_orbit_match(benchmark::State& state) {
  ProjMatrix g(RingElem::zero(S2), RingElem(S2, -1), RingElem::one(S2),
               RingElem::sqrt2(S2, 0, 1));
  ProjPoint p = ProjPoint::rational(1);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_match(g, p));
}
BENCHMARK(bm_orbit_match);

}  // namespace

BENCHMARK_MAIN();
