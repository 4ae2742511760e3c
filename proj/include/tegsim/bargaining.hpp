#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tegsim {

// The three rate-discovery mechanisms. Each one prices `alpha` units of the
// selling layer x against units of some buying layer y and reports the
// resulting x->y rate; the reverse rate is the reciprocal.

// --- Sealed-bid auction -----------------------------------------------------

struct Bid {
    std::string layer;  // the currency the bid is denominated in
    std::string bidder;
    double amount;
};

struct AuctionSpec {
    std::string item_layer;                     // x, the layer being sold
    double quantity = 0;                        // alpha > 0 units on offer
    std::map<std::string, double> minimum_bids; // allowable layers and their floors (> 0)
    std::vector<Bid> bids;
};

struct AuctionOutcome {
    std::string layer;  // winning currency y
    std::string bidder;
    double amount;      // the winning bid beta
    double rate;        // x -> y rate: beta / alpha
};

// Bids below their layer's floor (or in a layer with no floor, i.e. not
// allowable) are discarded. The winner maximises amount/floor — the premium
// over the seller's reserve, which is what makes bids in different currencies
// comparable. Ties resolve to the lexicographically smallest layer, then
// bidder. Returns nullopt when no valid bid survives.
std::optional<AuctionOutcome> run_auction(const AuctionSpec& spec);

// Sanity signal rather than an error: allowable bidders are supposed to hold
// both the item layer and their bid layer, so disjoint player sets usually
// mean a mis-configured auction.
std::vector<std::string> auction_overlap_warnings(
    const AuctionSpec& spec, const std::map<std::string, std::set<std::string>>& players_by_layer);

// --- Dice-average ratio -----------------------------------------------------

struct DiceSpec {
    int sides_a = 6; // every player on side A rolls a die with this many faces
    int sides_b = 6; // likewise for side B
    int players_a = 1;
    int players_b = 1;
};

// A reciprocal pair of rates. Where the ratio has an exact integer form it is
// kept in num/den: forward = num/den and backward = den/num are each correctly
// rounded, so reciprocity is exact at the rational level even where the two
// doubles cannot multiply to 1.0 bit-exactly. num = den = 0 flags a pair that
// has no integer form (the reciprocity then holds to within one ulp).
struct RatePair {
    double forward = 1.0;
    double backward = 1.0;
    long long num = 1;
    long long den = 1;
};

struct RandomRatioOutcome {
    double mean_a; // average of side A's rolls, in [1, sides_a]
    double mean_b; // average of side B's rolls, in [1, sides_b]
    RatePair rate; // forward = mean_b / mean_a
    std::vector<int> rolls_a;
    std::vector<int> rolls_b;
};

// All of side A rolls first (in player order), then side B; draws come from
// the library's deterministic generator, so one seed pins the whole outcome.
RandomRatioOutcome run_random_ratio(const DiceSpec& spec, std::uint64_t seed);

// --- Blind majority vote ----------------------------------------------------

struct BlindVoteSpec {
    double low = 0;               // candidate value alpha, 0 < low < high
    double high = 0;              // candidate value beta
    std::vector<double> votes_a;  // side A's votes, each exactly low or high
    std::vector<double> votes_b;  // side B's votes
};

struct BlindVoteOutcome {
    double pick_for_b; // majority of side A's votes — the value y trades at
    double pick_for_a; // majority of side B's votes — the value x trades at
    RatePair rate;     // forward = pick_for_b / pick_for_a, one of low/high, 1, high/low
};

// Each side blindly fixes the *other* side's number; ties break to the low
// candidate. The two picks always come from {low, high}, so the rate pair is
// reciprocal by construction (exactly 1 both ways when the picks agree).
BlindVoteOutcome run_blind_vote(const BlindVoteSpec& spec);

} // namespace tegsim
