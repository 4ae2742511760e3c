#include <doctest.h>

#include <numeric>

#include "tegsim/bargaining.hpp"
#include "test_util.hpp"

using namespace tegsim;
using tegsim_test::code_of;

TEST_CASE("auction picks the bid with the highest premium over its floor") {
    AuctionSpec spec;
    spec.item_layer = "gov";
    spec.quantity = 4.0;
    spec.minimum_bids = {{"usd", 2.0}, {"eur", 10.0}};
    spec.bids = {
        {"usd", "walt", 5.0},  // 2.5x its floor
        {"eur", "erin", 40.0}, // 4x its floor: wins despite a smaller multiple currency
        {"usd", "pete", 1.0},  // under the reserve, discarded
        {"rub", "rita", 99.0}, // not an allowable layer, discarded
    };
    const auto outcome = run_auction(spec);
    REQUIRE(outcome.has_value());
    CHECK(outcome->layer == "eur");
    CHECK(outcome->bidder == "erin");
    CHECK(outcome->amount == 40.0);
    CHECK(outcome->rate == 10.0); // 40 for 4 units

    // No surviving bid: a result the caller must handle, not an error.
    spec.bids = {{"usd", "pete", 1.0}};
    CHECK_FALSE(run_auction(spec).has_value());
    spec.bids.clear();
    CHECK_FALSE(run_auction(spec).has_value());
}

TEST_CASE("auction ties break to the smallest layer, then bidder") {
    AuctionSpec spec;
    spec.item_layer = "gov";
    spec.quantity = 1.0;
    spec.minimum_bids = {{"eur", 4.0}, {"usd", 2.0}};
    spec.bids = {
        {"usd", "zoe", 4.0}, // 2x floor
        {"eur", "amy", 8.0}, // 2x floor, "eur" < "usd"
    };
    auto outcome = run_auction(spec);
    REQUIRE(outcome.has_value());
    CHECK(outcome->layer == "eur");

    spec.bids = {{"usd", "zoe", 4.0}, {"usd", "amy", 4.0}};
    outcome = run_auction(spec);
    REQUIRE(outcome.has_value());
    CHECK(outcome->bidder == "amy");
}

TEST_CASE("auction specs are validated") {
    AuctionSpec spec;
    spec.item_layer = "gov";
    spec.quantity = 1.0;
    spec.minimum_bids = {{"usd", 2.0}};

    AuctionSpec self_bid = spec;
    self_bid.minimum_bids["gov"] = 1.0;
    CHECK(code_of([&] { run_auction(self_bid); }) == errc::validation_error);

    AuctionSpec own_currency = spec;
    own_currency.bids = {{"gov", "walt", 3.0}};
    CHECK(code_of([&] { run_auction(own_currency); }) == errc::validation_error);

    AuctionSpec bad_quantity = spec;
    bad_quantity.quantity = 0.0;
    CHECK(code_of([&] { run_auction(bad_quantity); }) == errc::validation_error);

    AuctionSpec bad_floor = spec;
    bad_floor.minimum_bids["usd"] = -1.0;
    CHECK(code_of([&] { run_auction(bad_floor); }) == errc::validation_error);

    AuctionSpec bad_amount = spec;
    bad_amount.bids = {{"usd", "walt", 0.0}};
    CHECK(code_of([&] { run_auction(bad_amount); }) == errc::validation_error);
}

TEST_CASE("auction overlap warnings flag disjoint player sets") {
    AuctionSpec spec;
    spec.item_layer = "gov";
    spec.quantity = 1.0;
    spec.minimum_bids = {{"usd", 2.0}, {"eur", 3.0}};
    const std::map<std::string, std::set<std::string>> players{
        {"gov", {"alice", "bob"}},
        {"usd", {"bob"}},
        {"eur", {"zara"}},
    };
    const auto warnings = auction_overlap_warnings(spec, players);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("eur") != std::string::npos);
}

TEST_CASE("dice ratio is reproducible and exactly reciprocal as a rational") {
    DiceSpec spec;
    spec.sides_a = 6;
    spec.sides_b = 20;
    spec.players_a = 3;
    spec.players_b = 5;

    const RandomRatioOutcome one = run_random_ratio(spec, 42);
    const RandomRatioOutcome two = run_random_ratio(spec, 42);
    CHECK(one.rolls_a == two.rolls_a);
    CHECK(one.rolls_b == two.rolls_b);
    CHECK(one.rate.forward == two.rate.forward);

    REQUIRE(one.rolls_a.size() == 3);
    REQUIRE(one.rolls_b.size() == 5);
    for (int r : one.rolls_a) CHECK((r >= 1 && r <= 6));
    for (int r : one.rolls_b) CHECK((r >= 1 && r <= 20));

    const long long sum_a = std::accumulate(one.rolls_a.begin(), one.rolls_a.end(), 0LL);
    const long long sum_b = std::accumulate(one.rolls_b.begin(), one.rolls_b.end(), 0LL);
    CHECK(one.mean_a == static_cast<double>(sum_a) / 3);
    CHECK(one.mean_b == static_cast<double>(sum_b) / 5);

    // The integer form is exactly reciprocal; the doubles are its correctly
    // rounded quotients in each direction.
    CHECK(one.rate.num == sum_b * 3);
    CHECK(one.rate.den == sum_a * 5);
    CHECK(one.rate.forward ==
          static_cast<double>(one.rate.num) / static_cast<double>(one.rate.den));
    CHECK(one.rate.backward ==
          static_cast<double>(one.rate.den) / static_cast<double>(one.rate.num));

    CHECK(run_random_ratio(spec, 43).rolls_a != one.rolls_a); // seed actually matters

    DiceSpec bad = spec;
    bad.sides_a = 0;
    CHECK(code_of([&] { run_random_ratio(bad, 1); }) == errc::validation_error);
    bad = spec;
    bad.players_b = 0;
    CHECK(code_of([&] { run_random_ratio(bad, 1); }) == errc::empty_voter_set);
}

TEST_CASE("blind vote crisscrosses the majorities") {
    BlindVoteSpec spec;
    spec.low = 1.0;
    spec.high = 2.0;
    spec.votes_a = {2, 2, 1}; // A's majority fixes B's value at high
    spec.votes_b = {1, 1, 2}; // B's majority fixes A's value at low

    const BlindVoteOutcome out = run_blind_vote(spec);
    CHECK(out.pick_for_b == 2.0);
    CHECK(out.pick_for_a == 1.0);
    CHECK(out.rate.forward == 2.0);
    CHECK(out.rate.backward == 0.5);
    CHECK(out.rate.num == 0); // real-valued picks carry no integer form
    CHECK(out.rate.den == 0);

    // Ties break to the low candidate.
    spec.votes_a = {1, 2};
    spec.votes_b = {2, 1};
    const BlindVoteOutcome tied = run_blind_vote(spec);
    CHECK(tied.pick_for_b == 1.0);
    CHECK(tied.pick_for_a == 1.0);
    CHECK(tied.rate.forward == 1.0);
    CHECK(tied.rate.backward == 1.0);
    CHECK(tied.rate.num == 1);
    CHECK(tied.rate.den == 1);

    // Equal picks at the high end are also an exact rate of 1.
    spec.votes_a = {2, 2, 2};
    spec.votes_b = {2, 2};
    CHECK(run_blind_vote(spec).rate.forward == 1.0);
}

TEST_CASE("blind vote rejects malformed ballots") {
    BlindVoteSpec spec;
    spec.low = 1.0;
    spec.high = 2.0;
    spec.votes_a = {1};
    spec.votes_b = {};
    CHECK(code_of([&] { run_blind_vote(spec); }) == errc::empty_voter_set);
    spec.votes_b = {1.5}; // not a candidate value
    CHECK(code_of([&] { run_blind_vote(spec); }) == errc::validation_error);
    spec.votes_b = {1};
    spec.low = 2.0;
    spec.high = 1.0;
    CHECK(code_of([&] { run_blind_vote(spec); }) == errc::validation_error);
    spec.low = 0.0;
    spec.high = 1.0;
    CHECK(code_of([&] { run_blind_vote(spec); }) == errc::validation_error);
}
