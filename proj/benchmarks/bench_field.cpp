#include <benchmark/benchmark.h>

#include "onc/field.hpp"

namespace {

void BM_FieldMul(benchmark::State& state) {
  const auto& f = onc::GaloisField::of(static_cast<int>(state.range(0)));
  onc::Symbol a = 3, acc = 1;
  for (auto _ : state) {
    acc = f.mul(acc, a) ^ 1;
    a = static_cast<onc::Symbol>((a + 7) & f.max_symbol());
    if (a == 0) a = 1;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_FieldMul)->Arg(1)->Arg(8)->Arg(16);

void BM_FieldInv(benchmark::State& state) {
  const auto& f = onc::GaloisField::of(8);
  onc::Symbol a = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.inv(a));
    a = static_cast<onc::Symbol>(a % 255 + 1);
  }
}
BENCHMARK(BM_FieldInv);

}  // namespace
