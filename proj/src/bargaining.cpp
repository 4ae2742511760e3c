#include "tegsim/bargaining.hpp"

#include <algorithm>
#include <cmath>

#include "tegsim/errors.hpp"
#include "tegsim/rng.hpp"

namespace tegsim {

static void check_auction(const AuctionSpec& spec) {
    if (spec.item_layer.empty())
        throw Error(errc::validation_error, "auction needs an item layer");
    if (!(spec.quantity > 0.0) || !std::isfinite(spec.quantity))
        throw Error(errc::validation_error, "auction quantity must be positive");
    if (spec.minimum_bids.count(spec.item_layer))
        throw Error(errc::validation_error,
                    "the item layer cannot bid on itself ('" + spec.item_layer + "')");
    for (const auto& [layer, floor] : spec.minimum_bids)
        if (!(floor > 0.0) || !std::isfinite(floor))
            throw Error(errc::validation_error, "minimum bid for '" + layer + "' must be positive");
    for (const Bid& b : spec.bids) {
        if (b.layer == spec.item_layer)
            throw Error(errc::validation_error,
                        "bid from '" + b.bidder + "' is denominated in the item layer");
        if (!(b.amount > 0.0) || !std::isfinite(b.amount))
            throw Error(errc::validation_error, "bid amounts must be positive");
    }
}

std::optional<AuctionOutcome> run_auction(const AuctionSpec& spec) {
    check_auction(spec);

    const Bid* best = nullptr;
    double best_ratio = 0.0;
    for (const Bid& b : spec.bids) {
        auto floor_it = spec.minimum_bids.find(b.layer);
        if (floor_it == spec.minimum_bids.end()) continue; // not an allowable layer
        if (b.amount < floor_it->second) continue;         // under the reserve
        const double ratio = b.amount / floor_it->second;
        const bool wins =
            !best || ratio > best_ratio ||
            (ratio == best_ratio &&
             (b.layer < best->layer || (b.layer == best->layer && b.bidder < best->bidder)));
        if (wins) {
            best = &b;
            best_ratio = ratio;
        }
    }
    if (!best) return std::nullopt;
    return AuctionOutcome{best->layer, best->bidder, best->amount,
                          best->amount / spec.quantity};
}

std::vector<std::string> auction_overlap_warnings(
    const AuctionSpec& spec,
    const std::map<std::string, std::set<std::string>>& players_by_layer) {
    std::vector<std::string> warnings;
    auto item_it = players_by_layer.find(spec.item_layer);
    if (item_it == players_by_layer.end()) {
        warnings.push_back("item layer '" + spec.item_layer + "' has no player set");
        return warnings;
    }
    for (const auto& [layer, floor] : spec.minimum_bids) {
        auto it = players_by_layer.find(layer);
        if (it == players_by_layer.end()) {
            warnings.push_back("bid layer '" + layer + "' has no player set");
            continue;
        }
        const bool overlap = std::any_of(it->second.begin(), it->second.end(),
                                         [&](const std::string& p) {
                                             return item_it->second.count(p) != 0;
                                         });
        if (!overlap)
            warnings.push_back("bid layer '" + layer + "' shares no players with item layer '" +
                               spec.item_layer + "'");
    }
    return warnings;
}

// Correctly rounded num/den and den/num from an exact integer ratio.
static RatePair rational_rate(long long num, long long den) {
    RatePair out;
    out.num = num;
    out.den = den;
    out.forward = static_cast<double>(num) / static_cast<double>(den);
    out.backward = static_cast<double>(den) / static_cast<double>(num);
    return out;
}

RandomRatioOutcome run_random_ratio(const DiceSpec& spec, std::uint64_t seed) {
    if (spec.sides_a < 1 || spec.sides_b < 1)
        throw Error(errc::validation_error, "dice need at least one face");
    if (spec.players_a < 1 || spec.players_b < 1)
        throw Error(errc::empty_voter_set, "both sides need at least one roller");

    Rng rng(seed);
    RandomRatioOutcome out;
    long long sum_a = 0, sum_b = 0;
    out.rolls_a.reserve(static_cast<std::size_t>(spec.players_a));
    out.rolls_b.reserve(static_cast<std::size_t>(spec.players_b));
    for (int i = 0; i < spec.players_a; ++i) {
        const int roll = static_cast<int>(rng.uniform_int(1, spec.sides_a));
        out.rolls_a.push_back(roll);
        sum_a += roll;
    }
    for (int i = 0; i < spec.players_b; ++i) {
        const int roll = static_cast<int>(rng.uniform_int(1, spec.sides_b));
        out.rolls_b.push_back(roll);
        sum_b += roll;
    }
    out.mean_a = static_cast<double>(sum_a) / spec.players_a;
    out.mean_b = static_cast<double>(sum_b) / spec.players_b;
    // mean_b / mean_a == (sum_b * players_a) / (sum_a * players_b), exactly.
    out.rate = rational_rate(sum_b * spec.players_a, sum_a * spec.players_b);
    return out;
}

BlindVoteOutcome run_blind_vote(const BlindVoteSpec& spec) {
    if (!(spec.low > 0.0) || !(spec.high > spec.low) || !std::isfinite(spec.high))
        throw Error(errc::validation_error, "candidates must satisfy 0 < low < high");
    if (spec.votes_a.empty() || spec.votes_b.empty())
        throw Error(errc::empty_voter_set, "both sides must cast at least one vote");

    auto majority = [&](const std::vector<double>& votes, const char* side) {
        long highs = 0;
        for (double v : votes) {
            if (v == spec.high)
                ++highs;
            else if (v != spec.low)
                throw Error(errc::validation_error,
                            std::string("vote from side ") + side + " is not a candidate value");
        }
        // Strict majority for the high value; ties land on the low candidate.
        return 2 * highs > static_cast<long>(votes.size()) ? spec.high : spec.low;
    };

    BlindVoteOutcome out;
    out.pick_for_b = majority(spec.votes_a, "A"); // A's voters set B's number
    out.pick_for_a = majority(spec.votes_b, "B"); // and vice versa
    if (out.pick_for_b == out.pick_for_a) {
        out.rate = RatePair{}; // 1 both ways, exactly
    } else {
        out.rate.forward = out.pick_for_b / out.pick_for_a;
        out.rate.backward = out.pick_for_a / out.pick_for_b;
        out.rate.num = 0; // the picks are reals; no integer form
        out.rate.den = 0;
    }
    return out;
}

} // namespace tegsim
