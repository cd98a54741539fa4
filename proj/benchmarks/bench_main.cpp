#include <benchmark/benchmark.h>

#include "pegsim/adaptor_sig.hpp"
#include "pegsim/amm.hpp"
#include "pegsim/scenario.hpp"
#include "pegsim/swap_engine.hpp"
#include "pegsim/vault.hpp"

using namespace pegsim;

static void BM_RistrettoMulBase(benchmark::State& state) {
    const Group& g = ristretto_group();
    Scalar k = g.scalar_from_u64(1234567);
    for (auto _ : state) benchmark::DoNotOptimize(g.mul_base(k));
}
BENCHMARK(BM_RistrettoMulBase);

static void BM_PreSignVerify(benchmark::State& state) {
    const Group& g = ristretto_group();
    auto kp = keygen(g, {1, 2, 3});
    auto t = keygen(g, {9, 9, 9});
    Bytes m{0xde, 0xad};
    for (auto _ : state) {
        auto pre = pre_sign(g, kp, m, t.pk, {4, 4});
        benchmark::DoNotOptimize(pre_verify(g, kp.pk, m, t.pk, pre));
    }
}
BENCHMARK(BM_PreSignVerify);

static void BM_AdaptExtract(benchmark::State& state) {
    const Group& g = ristretto_group();
    auto kp = keygen(g, {1, 2, 3});
    auto t = keygen(g, {9, 9, 9});
    Bytes m{0xde, 0xad};
    auto pre = pre_sign(g, kp, m, t.pk, {4, 4});
    for (auto _ : state) {
        auto sig = adapt(g, pre, t.sk);
        benchmark::DoNotOptimize(extract_secret(g, sig, pre));
    }
}
BENCHMARK(BM_AdaptExtract);

static void BM_AmmSwap(benchmark::State& state) {
    amm::Pool p(1e6, 1e6, 30, "bench");
    double size = 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.execute_swap(size));
        benchmark::DoNotOptimize(p.execute_swap_stable_in(size));
    }
}
BENCHMARK(BM_AmmSwap);

static void BM_RationalSwap(benchmark::State& state) {
    amm::RationalPool p(amm::Rational(1000000), amm::Rational(1000000), 0, "r");
    amm::Rational size(100);
    for (auto _ : state) benchmark::DoNotOptimize(p.execute_swap(size));
}
BENCHMARK(BM_RationalSwap);

static void BM_SwapSession(benchmark::State& state) {
    const Group& g = ristretto_group();
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            swap::adversarial_atomicity_game(g, seed % swap::kAdversaryCount,
                                             seed++));
}
BENCHMARK(BM_SwapSession);

static void BM_Rebalance(benchmark::State& state) {
    Eigen::VectorXd g(4);
    g << 1.0, -0.5, 0.25, 2.0;
    Eigen::MatrixXd J(4, 4);
    J << 2, 0.1, 0, 0, 0.1, 1.5, 0.2, 0, 0, 0.2, 1.0, 0.3, 0, 0, 0.3, 0.8;
    for (auto _ : state)
        benchmark::DoNotOptimize(vault::rebalance(g, J, 0.7, 500, 1e-10));
}
BENCHMARK(BM_Rebalance);

static void BM_BaselineScenario(benchmark::State& state) {
    auto cfg = scenario::baseline_config();
    cfg.blocks = std::uint64_t(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(scenario::run_scenario(cfg));
}
BENCHMARK(BM_BaselineScenario)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
