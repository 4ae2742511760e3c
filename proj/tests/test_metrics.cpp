#include <doctest.h>

#include <cmath>
#include <limits>

#include "tegsim/metrics.hpp"
#include "test_util.hpp"

using namespace tegsim;
using tegsim_test::code_of;

TEST_CASE("normalize scales to a probability vector") {
    const auto dist = normalize(std::vector<double>{30, 10, 0});
    CHECK(dist.p[0] == doctest::Approx(0.75));
    CHECK(dist.p[1] == doctest::Approx(0.25));
    CHECK(dist.p[2] == 0.0);
    CHECK(code_of([] { normalize(std::vector<double>{0, 0}); }) == errc::zero_supply);
    CHECK(code_of([] { normalize(std::vector<double>{}); }) == errc::zero_supply);

    const LayerState s("main", {{"a", 2}, {"b", 6}});
    CHECK(normalize(s).p[1] == doctest::Approx(0.75));
}

TEST_CASE("entropy is exact on degenerate and power-of-two uniform spreads") {
    // One holder: zero bits, exactly.
    CHECK(entropy(TokenDistribution{{1, 0, 0, 0}}) == 0.0);
    // Uniform over 2^k slots: exactly k bits, no tolerance needed — every term
    // is a dyadic rational times an exact log2.
    for (int k = 0; k <= 6; ++k) {
        const int n = 1 << k;
        const TokenDistribution uniform{std::vector<double>(n, 1.0 / n)};
        CHECK(entropy(uniform) == static_cast<double>(k));
    }
}

TEST_CASE("entropy rejects junk distributions") {
    CHECK(code_of([] { entropy(TokenDistribution{{0.5, 0.7}}); }) == errc::validation_error);
    CHECK(code_of([] { entropy(TokenDistribution{{-0.1, 1.1}}); }) == errc::validation_error);
    CHECK(code_of([] { entropy(TokenDistribution{{}}); }) == errc::validation_error);
}

TEST_CASE("relative entropy matches the hand-computed oracle") {
    const TokenDistribution p{{0.5, 0.5}};
    const TokenDistribution q{{0.25, 0.75}};
    // 0.5*log2(2) + 0.5*log2(2/3) = 1 - 0.5*log2(3)
    const double oracle = 1.0 - 0.5 * std::log2(3.0);
    CHECK(relative_entropy(p, q) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(relative_entropy(p, q) == doctest::Approx(0.20751874963942).epsilon(1e-10));

    // D(p||p) is exactly zero: every log ratio is log(1).
    CHECK(relative_entropy(p, p) == 0.0);

    // Mass where the target has none: the +infinity marker, not a throw.
    const TokenDistribution spiked{{1.0, 0.0}};
    const TokenDistribution hole{{0.0, 1.0}};
    CHECK(std::isinf(relative_entropy(spiked, hole)));

    CHECK(code_of([&] { relative_entropy(p, TokenDistribution{{1.0}}); }) ==
          errc::dimension_mismatch);
}

TEST_CASE("rounds-to-target divides divergence by the decay rate") {
    const TokenDistribution p{{0.5, 0.5}};
    const TokenDistribution q{{0.25, 0.75}};
    const double d = relative_entropy(p, q);
    CHECK(rounds_to_target(p, q, 0.1) == doctest::Approx(d / 0.1));
    CHECK(rounds_to_target(q, q, 123.0) == 0.0);
    CHECK(code_of([&] { rounds_to_target(p, q, 0.0); }) == errc::non_positive_rate);
    CHECK(code_of([&] { rounds_to_target(p, q, -1.0); }) == errc::non_positive_rate);

    const TokenDistribution spiked{{1.0, 0.0}};
    const TokenDistribution hole{{0.0, 1.0}};
    CHECK(code_of([&] { rounds_to_target(spiked, hole, 0.1); }) == errc::infinite_divergence);
}

TEST_CASE("divergence decay rate averages per-round drops") {
    const TokenDistribution target{{0.5, 0.5}};
    const std::vector<TokenDistribution> traj{
        TokenDistribution{{0.9, 0.1}},
        TokenDistribution{{0.7, 0.3}},
        TokenDistribution{{0.6, 0.4}},
    };
    const double first = relative_entropy(traj.front(), target);
    const double last = relative_entropy(traj.back(), target);
    CHECK(estimate_divergence_rate(traj, target) == doctest::Approx((first - last) / 2.0));
    CHECK(code_of([&] { estimate_divergence_rate({traj[0]}, target); }) ==
          errc::validation_error);
}

TEST_CASE("zeta averages diagonal weights over the active set") {
    TransferMatrix w(3);
    w.set(0, 0, 0.9);
    w.set(1, 0, 0.1);
    w.set(1, 1, 1.0);
    w.set(2, 2, 0.5);
    w.set(0, 2, 0.5);

    const CirculationReport all = zeta(w);
    CHECK(all.zeta == doctest::Approx((0.9 + 1.0 + 0.5) / 3));
    CHECK(all.zeta_star == doctest::Approx(1.0 - all.zeta));
    CHECK(all.active_count == 3);

    const CirculationReport some = zeta(w, {0, 2});
    CHECK(some.zeta == doctest::Approx(0.7));
    CHECK(some.active_count == 2);

    CHECK(code_of([&] { zeta(w, {3}); }) == errc::dimension_mismatch);
    CHECK(code_of([&] { zeta(TransferMatrix(0)); }) == errc::empty_active_set);

    CHECK(zeta_global({0.5, 0.7}) == doctest::Approx(0.6));
    CHECK(code_of([] { zeta_global({}); }) == errc::empty_index_sets);
}

TEST_CASE("inflation ratio prices circulating supply against circulating supply") {
    // 1000 tokens hoarded at 0.2 vs 100 tokens hoarded at 0.5:
    // (0.8 * 1000) / (0.5 * 100) = 16.
    CHECK(inflation_ratio(0.2, 1000, 0.5, 100) == doctest::Approx(16));
    CHECK(code_of([] { inflation_ratio(0.2, 1000, 1.0, 100); }) == errc::no_demand);
    CHECK(code_of([] { inflation_ratio(0.2, 1000, 0.5, 0); }) == errc::no_demand);
}

TEST_CASE("exchange identity components multiply consistently") {
    const ExchangeIdentity id = exchange_identity(0.25, 400, 0.5, 80);
    CHECK(id.m == 400);
    CHECK(id.v == doctest::Approx(0.75));
    CHECK(id.q == doctest::Approx(40));
    CHECK(id.p == doctest::Approx(300.0 / 40.0));
    CHECK(id.m * id.v == doctest::Approx(id.p * id.q).epsilon(1e-12));
}
