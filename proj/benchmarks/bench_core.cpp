#include <benchmark/benchmark.h>

#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/random.hpp"
#include "qpa/renyi.hpp"
#include "qpa/simulator.hpp"

namespace {

qpa::CQState state(std::size_t alphabet, qpa::Index dim, std::uint64_t seed) {
  qpa::RandomStream rng(seed);
  return qpa::random_cq_state(alphabet, dim, rng);
}

void BM_GFMul(benchmark::State& st) {
  const qpa::GFContext ctx(static_cast<unsigned>(st.range(0)));
  qpa::FieldElement x = 3, acc = 0;
  for (auto _ : st) {
    acc ^= ctx.mul(x, acc | 1u);
    x = (x * 5u + 1u) & (ctx.size() - 1u);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_GFMul)->Arg(4)->Arg(8)->Arg(16);

void BM_MatPower(benchmark::State& st) {
  qpa::RandomStream rng(1);
  const auto a = qpa::random_psd(st.range(0), rng);
  for (auto _ : st) benchmark::DoNotOptimize(qpa::mat_power(a, 0.37));
}
BENCHMARK(BM_MatPower)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_DownEntropy(benchmark::State& st) {
  const auto s = state(4, st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(qpa::conditional_entropy(qpa::EntropyKind::down, s, 0.75));
}
BENCHMARK(BM_DownEntropy)->Arg(2)->Arg(4);

void BM_StarEntropy(benchmark::State& st) {
  const auto s = state(4, st.range(0), 3);
  for (auto _ : st) benchmark::DoNotOptimize(qpa::conditional_entropy(qpa::EntropyKind::star, s, 1.5));
}
BENCHMARK(BM_StarEntropy)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_StarEntropyNearOne(benchmark::State& st) {
  const auto s = state(2, 2, 4);
  for (auto _ : st) benchmark::DoNotOptimize(qpa::conditional_entropy(qpa::EntropyKind::star, s, 1.0 + 1e-5));
}
BENCHMARK(BM_StarEntropyNearOne)->Unit(benchmark::kMicrosecond);

void BM_AllExponents(benchmark::State& st) {
  const auto s = state(2, 2, 5);
  for (auto _ : st) {
    qpa::ExponentEngine eng(s);
    const double h = eng.entropy_vn(), i = eng.information_vn();
    benchmark::DoNotOptimize(eng.pa_converse(h + 0.1).exponent);
    benchmark::DoNotOptimize(eng.pa_achievability(h - 0.1).exponent);
    benchmark::DoNotOptimize(eng.wiretap_secrecy(i + 0.1).exponent);
    benchmark::DoNotOptimize(eng.wiretap_converse(i + 0.1).exponent);
  }
}
BENCHMARK(BM_AllExponents)->Unit(benchmark::kMillisecond);

void BM_ExactPADistance(benchmark::State& st) {
  const auto n = static_cast<unsigned>(st.range(0));
  const auto s = qpa::iid_extend(state(4, 2, 6), n);
  const qpa::GFContext ctx(2 * n);
  for (auto _ : st) benchmark::DoNotOptimize(qpa::exact_pa_distance(s, ctx, n).value);
}
BENCHMARK(BM_ExactPADistance)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_WiretapTiny(benchmark::State& st) {
  const std::vector<qpa::DensityOperator> eve{qpa::DensityOperator::diagonal({1.0, 0.0}),
                                              qpa::DensityOperator::diagonal({0.0, 1.0})};
  for (auto _ : st) {
    benchmark::DoNotOptimize(qpa::wiretap_d1(eve, {0.5, 0.5}, 1, 1, qpa::WiretapMode::exact).value);
  }
}
BENCHMARK(BM_WiretapTiny)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
