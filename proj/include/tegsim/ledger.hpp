#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tegsim/errors.hpp"

namespace tegsim {

// Balance book for one token type: insertion-ordered (label, balance) pairs.
// Labels are unique and balances never go negative. Labels may not contain
// commas, quotes or newlines so that the CSV formats stay trivial.
class Ledger {
public:
    Ledger() = default;

    // Inserts a new entry or overwrites an existing balance.
    void set(const std::string& label, double balance);

    bool contains(const std::string& label) const;
    double balance(const std::string& label) const; // throws unknown_player
    std::size_t size() const { return entries_.size(); }
    double total() const;

    const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    static void check_label(const std::string& label); // throws validation_error

private:
    std::vector<std::pair<std::string, double>> entries_;
};

// Denominations a token can be physically split into, smallest first,
// plus the resolution bound epsilon the smallest denomination must satisfy.
struct TokenSet {
    std::vector<double> denominations; // strictly increasing, all > 0
    double epsilon = 0;
};

struct TokenCount {
    double denomination;
    long long count; // > 0
};

// Greedy largest-denomination-first representation of `value`; never
// overshoots, so 0 <= value - sum <= smallest denomination. Returned
// largest-denomination-first with zero counts omitted.
std::vector<TokenCount> tokenise(double value, const TokenSet& tokens);

struct TokenSetVerdict {
    bool ok = true;
    std::string detail; // first violation, empty when ok
};

// A token set fits a ledger when t_min <= epsilon and every balance's greedy
// residual is within t_min. (The residual bound holds by construction for the
// greedy scheme; it is still checked and reported rather than assumed.)
TokenSetVerdict validate_token_set(const TokenSet& tokens, const Ledger& ledger);

// Chronological ledger snapshots with strictly increasing round indices
// starting at 0.
class LedgerSequence {
public:
    void append(int round, Ledger snapshot);

    std::size_t size() const { return snaps_.size(); }
    bool empty() const { return snaps_.empty(); }
    const std::pair<int, Ledger>& at(std::size_t i) const { return snaps_.at(i); }
    const std::pair<int, Ledger>& back() const { return snaps_.back(); }
    auto begin() const { return snaps_.begin(); }
    auto end() const { return snaps_.end(); }

private:
    std::vector<std::pair<int, Ledger>> snaps_;
};

} // namespace tegsim
