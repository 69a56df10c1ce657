#include <benchmark/benchmark.h>

#include "qtop/extension.hpp"
#include "qtop/invariants.hpp"
#include "qtop/operators.hpp"
#include "qtop/symmetry.hpp"
#include "qtop/wienerhopf.hpp"

namespace {

using namespace qtop;

Matrix entry(int r, int c, Complex v = 1.0) {
  Matrix m = Matrix::Zero(2, 2);
  m(r, c) = v;
  return m;
}

LaurentSymbol golden() {
  return LaurentSymbol::from_terms(
      2, 2, {{{1, 0}, entry(0, 0)}, {{0, -1}, entry(0, 1, -1.0)}, {{0, 1}, entry(1, 0)}, {{-1, 0}, entry(1, 1)}});
}

void BM_Factorize(benchmark::State& state) {
  const LaurentSymbol f = direct_sum(golden(), golden());
  const LaurentSymbol s = slice(f, 0, {unit(0.7)}).to_symbol();
  FactorizationOptions o;
  o.truncation = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(canonical_factorize(s, o));
}
BENCHMARK(BM_Factorize)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PartialIndices(benchmark::State& state) {
  const LaurentSymbol s = slice(golden(), 1, {unit(0.3)}).to_symbol();
  for (auto _ : state) benchmark::DoNotOptimize(partial_indices(s));
}
BENCHMARK(BM_PartialIndices)->Unit(benchmark::kMillisecond);

void BM_BuildExtended(benchmark::State& state) {
  ExtensionOptions o;
  o.samples_per_circle = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_extended(golden(), o));
}
BENCHMARK(BM_BuildExtended)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_W3(benchmark::State& state) {
  const ExtendedSymbol ext = build_extended(golden());
  W3Options o;
  o.n_theta = o.n_phi = static_cast<int>(state.range(0));
  o.n_rho = static_cast<int>(state.range(0)) / 2 + 1;
  for (auto _ : state) benchmark::DoNotOptimize(w3(ext, o));
}
BENCHMARK(BM_W3)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CornerSpectrum(benchmark::State& state) {
  const LaurentSymbol h = assemble_chiral(golden());
  const Matrix pi = default_chirality(4);
  for (auto _ : state) benchmark::DoNotOptimize(corner_spectrum(h, static_cast<int>(state.range(0)), pi));
}
BENCHMARK(BM_CornerSpectrum)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_NumericalIndex(benchmark::State& state) {
  const LaurentSymbol f = golden();
  for (auto _ : state) benchmark::DoNotOptimize(numerical_index(f, {static_cast<int>(state.range(0))}));
}
BENCHMARK(BM_NumericalIndex)->Arg(10)->Arg(18)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
