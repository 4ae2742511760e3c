#include <doctest.h>

#include <algorithm>

#include "tegsim/multilayer.hpp"
#include "test_util.hpp"

using namespace tegsim;
using tegsim_test::code_of;

namespace {

// The worked four-layer example: rates posted so that trading around
// 0 -> 1 -> 2 -> 0 multiplies a stake by 10 * 5 * 6 = 300.
FungibilityMatrix gainful_rates() {
    FungibilityMatrix rho({"l0", "l1", "l2", "l3"});
    rho.set(0, 1, 10.0);
    rho.set(1, 0, 0.1);
    rho.set(1, 2, 5.0);
    rho.set(2, 1, 0.2);
    rho.set(2, 0, 6.0);
    rho.set(0, 2, 1.0 / 6.0);
    rho.set(0, 3, 2.0);
    rho.set(3, 0, 0.5);
    return rho;
}

} // namespace

TEST_CASE("fungibility matrix keeps unavailability distinct from any rate") {
    FungibilityMatrix rho({"usd", "eur"});
    CHECK(rho.size() == 2);
    CHECK(rho.rate(0, 0) == 1.0);
    CHECK_FALSE(rho.rate(0, 1).has_value());

    rho.set("usd", "eur", 0.9);
    CHECK(rho.rate("usd", "eur") == 0.9);
    CHECK_FALSE(rho.rate("eur", "usd").has_value());
    rho.clear(0, 1);
    CHECK_FALSE(rho.rate(0, 1).has_value());

    CHECK(code_of([&] { rho.set(0, 0, 2.0); }) == errc::validation_error);
    CHECK(code_of([&] { rho.clear(1, 1); }) == errc::validation_error);
    CHECK(code_of([&] { (void)rho.rate(2, 0); }) == errc::dimension_mismatch);
    CHECK(code_of([&] { rho.index_of("yen"); }) == errc::unknown_layer);
    CHECK(code_of([] { FungibilityMatrix({"a", "a"}); }) == errc::validation_error);

    rho.set(0, 1, -2.0); // storable, but not valid
    CHECK_FALSE(rho.validate().ok);
    rho.set(0, 1, 0.9);
    CHECK(rho.validate().ok);
}

TEST_CASE("portfolio collects one player's balances across layers") {
    const LayerState a("usd", {{"alice", 10}, {"bob", 1}});
    const LayerState b("eur", {{"bob", 5}});
    const PortfolioVector alice = portfolio("alice", {a, b});
    REQUIRE(alice.holdings.size() == 2);
    CHECK(alice.holdings[0] == std::pair<std::string, double>{"usd", 10.0});
    CHECK(alice.holdings[1] == std::pair<std::string, double>{"eur", 0.0});
}

TEST_CASE("isolation is having no players in common with any other layer") {
    const std::map<std::string, std::set<std::string>> players{
        {"usd", {"alice", "bob"}},
        {"eur", {"bob", "carol"}},
        {"rub", {"dave"}},
    };
    CHECK(is_isolated("rub", players));
    CHECK_FALSE(is_isolated("usd", players));
    CHECK(code_of([&] { is_isolated("yen", players); }) == errc::unknown_layer);

    FungibilityMatrix rho({"eur", "rub", "usd"});
    rho.set("usd", "eur", 1.1);
    CHECK(isolation_rate_conflicts(rho, players).empty());
    rho.set("rub", "usd", 90.0); // a rate into an isolated layer
    const auto conflicts = isolation_rate_conflicts(rho, players);
    REQUIRE(conflicts.size() == 1);
    CHECK(conflicts[0] == std::pair<int, int>{rho.index_of("rub"), rho.index_of("usd")});
}

TEST_CASE("local equilibrium means reciprocal rates within tolerance") {
    FungibilityMatrix rho({"a", "b"});
    rho.set(0, 1, 4.0);
    CHECK_FALSE(local_equilibrium(rho, 0, 1)); // one direction missing
    rho.set(1, 0, 0.25);
    CHECK(local_equilibrium(rho, 0, 1));
    rho.set(1, 0, 0.2500001);
    CHECK_FALSE(local_equilibrium(rho, 0, 1));
    CHECK(local_equilibrium(rho, 0, 1, 1e-3));
    CHECK(local_equilibrium(rho, 0, 0)); // the diagonal is trivially reciprocal
}

TEST_CASE("the exchange graph carries rates and optional costs") {
    const FungibilityMatrix rho = gainful_rates();
    const FungibilityGraph plain = fungibility_graph(rho);
    CHECK(plain.layers.size() == 4);
    CHECK(plain.edges.size() == 8);
    for (const auto& e : plain.edges) {
        CHECK_FALSE(e.kappa.has_value());
        CHECK(rho.rate(e.from, e.to) == e.rate);
    }

    CostMatrix kappa(4, std::vector<double>(4, 1.0));
    kappa[0][3] = 0.0; // posted rate, zero cost: contradictory input
    kappa[3][0] = 0.0;
    CHECK(code_of([&] { fungibility_graph(rho, kappa); }) == errc::cost_edge_mismatch);
    kappa[0][3] = 2.0;
    kappa[3][0] = 2.0;
    const FungibilityGraph priced = fungibility_graph(rho, kappa);
    for (const auto& e : priced.edges) CHECK(e.kappa.has_value());

    CHECK(code_of([&] { fungibility_graph(rho, CostMatrix(2, std::vector<double>(2, 1.0))); }) ==
          errc::dimension_mismatch);

    FungibilityMatrix broken({"a", "b"});
    broken.set(0, 1, -1.0);
    CHECK(code_of([&] { fungibility_graph(broken); }) == errc::validation_error);
}

TEST_CASE("arbitrage search finds the worked 300x cycle") {
    const auto cycle = find_arbitrage(fungibility_graph(gainful_rates()));
    REQUIRE(cycle.has_value());
    CHECK(cycle->cycle == std::vector<int>{0, 1, 2});
    CHECK(cycle->gain == doctest::Approx(300.0).epsilon(1e-9));
}

TEST_CASE("reciprocal-only rates carry no arbitrage") {
    // Rates derived from per-layer potentials are globally consistent.
    const std::vector<double> phi{1.0, 3.0, 0.25, 7.0};
    FungibilityMatrix rho({"a", "b", "c", "d"});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) rho.set(i, j, phi[j] / phi[i]);
    CHECK_FALSE(find_arbitrage(fungibility_graph(rho)).has_value());

    // A loose tolerance must not flag a barely-gainful loop, a tight one must.
    FungibilityMatrix close({"a", "b"});
    close.set(0, 1, 2.0);
    close.set(1, 0, 0.5 * (1.0 + 1e-6));
    const FungibilityGraph g = fungibility_graph(close);
    CHECK_FALSE(find_arbitrage(g, 1e-3).has_value());
    const auto found = find_arbitrage(g, 1e-9);
    REQUIRE(found.has_value());
    CHECK(found->gain == doctest::Approx(1.0 + 1e-6));
}

TEST_CASE("structural dichotomy: forest, free cycles, or a counterexample") {
    // A star graph (a-b, a-c) with positive mu: acyclic.
    FungibilityMatrix star({"a", "b", "c"});
    star.set(0, 1, 2.0);
    star.set(1, 0, 0.5);
    star.set(0, 2, 3.0);
    star.set(2, 0, 1.0 / 3.0);
    CostMatrix mu(3, std::vector<double>(3, 0.5));
    CHECK(check_theorem_b(fungibility_graph(star, {}, mu)).status == TheoremBStatus::acyclic);

    // A triangle with all-zero mu: cycles, but friction-free.
    FungibilityMatrix tri({"a", "b", "c"});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) tri.set(i, j, 1.0);
    CostMatrix zero(3, std::vector<double>(3, 0.0));
    CHECK(check_theorem_b(fungibility_graph(tri, {}, zero)).status == TheoremBStatus::zero_mu);

    // The same triangle with one positive mu edge: counterexample, and the
    // witness cycle crosses the positive-mu edge.
    CostMatrix one = zero;
    one[0][1] = 0.25;
    const TheoremBReport rep = check_theorem_b(fungibility_graph(tri, {}, one));
    CHECK(rep.status == TheoremBStatus::counterexample);
    REQUIRE(rep.cycle.size() == 3);
    const auto on_cycle = [&](int a, int b) {
        for (std::size_t i = 0; i < rep.cycle.size(); ++i) {
            const int u = rep.cycle[i];
            const int v = rep.cycle[(i + 1) % rep.cycle.size()];
            if ((u == a && v == b) || (u == b && v == a)) return true;
        }
        return false;
    };
    CHECK(on_cycle(0, 1));

    // Mu annotations are mandatory for the dichotomy.
    CHECK(code_of([&] { check_theorem_b(fungibility_graph(tri)); }) == errc::missing_mu);
}

TEST_CASE("cross-layer swaps settle both legs or neither") {
    const LayerState usd("usd", {{"alice", 10}, {"bob", 0}});
    const LayerState eur("eur", {{"bob", 50}});

    const auto [usd2, eur2] = cross_layer_swap(usd, eur, "alice", "bob", 4.0, 5.0);
    CHECK(usd2.balance("alice") == 6);
    CHECK(usd2.balance("bob") == 4);
    CHECK(eur2.balance("bob") == 30);
    CHECK(eur2.balance("alice") == 20); // auto-added to receive
    CHECK(usd2.supply() == doctest::Approx(usd.supply()));
    CHECK(eur2.supply() == doctest::Approx(eur.supply()));

    CHECK(code_of([&] { cross_layer_swap(usd, eur, "alice", "bob", 4.0, {}); }) ==
          errc::rate_unavailable);
    CHECK(code_of([&] { cross_layer_swap(usd, eur, "alice", "bob", 11.0, 1.0); }) ==
          errc::insufficient_balance);
    CHECK(code_of([&] { cross_layer_swap(usd, eur, "alice", "bob", 4.0, 100.0); }) ==
          errc::insufficient_balance);
    CHECK(code_of([&] { cross_layer_swap(usd, eur, "alice", "alice", 1.0, 1.0); }) ==
          errc::validation_error);
    CHECK(code_of([&] { cross_layer_swap(usd, eur, "alice", "bob", -1.0, 1.0); }) ==
          errc::validation_error);

    const auto [same_a, same_b] = cross_layer_swap(usd, eur, "alice", "bob", 0.0, 5.0);
    CHECK(same_a.balance("alice") == 10);
    CHECK(same_b.balance("bob") == 50);
}
