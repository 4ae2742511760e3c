#include "tegsim/ledger.hpp"

#include <algorithm>
#include <cmath>

namespace tegsim {

void Ledger::check_label(const std::string& label) {
    if (label.empty())
        throw Error(errc::validation_error, "empty player label");
    if (label.find_first_of(",\"\r\n") != std::string::npos)
        throw Error(errc::validation_error, "player label '" + label +
                                                "' contains CSV-breaking characters");
}

void Ledger::set(const std::string& label, double balance) {
    check_label(label);
    if (!(balance >= 0.0)) // also rejects NaN
        throw Error(errc::validation_error,
                    "negative balance " + std::to_string(balance) + " for '" + label + "'");
    for (auto& [name, value] : entries_) {
        if (name == label) {
            value = balance;
            return;
        }
    }
    entries_.emplace_back(label, balance);
}

bool Ledger::contains(const std::string& label) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == label; });
}

double Ledger::balance(const std::string& label) const {
    for (const auto& [name, value] : entries_)
        if (name == label) return value;
    throw Error(errc::unknown_player, "'" + label + "' not in ledger");
}

double Ledger::total() const {
    double sum = 0.0;
    for (const auto& [name, value] : entries_) sum += value;
    return sum;
}

static void check_token_set(const TokenSet& tokens) {
    if (tokens.denominations.empty())
        throw Error(errc::empty_token_set, "token set has no denominations");
    double prev = 0.0;
    for (double d : tokens.denominations) {
        if (!(d > prev) || !std::isfinite(d))
            throw Error(errc::validation_error,
                        "denominations must be positive, finite and strictly increasing");
        prev = d;
    }
}

std::vector<TokenCount> tokenise(double value, const TokenSet& tokens) {
    check_token_set(tokens);
    if (!(value >= 0.0) || !std::isfinite(value))
        throw Error(errc::validation_error, "cannot tokenise " + std::to_string(value));

    std::vector<TokenCount> out;
    double remaining = value;
    for (auto it = tokens.denominations.rbegin(); it != tokens.denominations.rend(); ++it) {
        const double denom = *it;
        if (denom > remaining) continue;
        auto count = static_cast<long long>(std::floor(remaining / denom));
        double used = static_cast<double>(count) * denom;
        // The division can round up across an integer boundary; back off one
        // token rather than overshoot the value.
        if (used > remaining) {
            --count;
            used = static_cast<double>(count) * denom;
        }
        if (count <= 0) continue;
        out.push_back({denom, count});
        remaining -= used;
        if (remaining <= 0.0) break;
    }
    return out;
}

TokenSetVerdict validate_token_set(const TokenSet& tokens, const Ledger& ledger) {
    check_token_set(tokens);
    const double t_min = tokens.denominations.front();
    if (t_min > tokens.epsilon)
        return {false, "smallest denomination " + std::to_string(t_min) +
                           " exceeds epsilon " + std::to_string(tokens.epsilon)};
    for (const auto& [label, balance] : ledger) {
        double represented = 0.0;
        for (const TokenCount& tc : tokenise(balance, tokens))
            represented += static_cast<double>(tc.count) * tc.denomination;
        const double residual = balance - represented;
        if (residual < 0.0 || residual > t_min)
            return {false, "balance of '" + label + "' leaves residual " +
                               std::to_string(residual) + " outside [0, " +
                               std::to_string(t_min) + "]"};
    }
    return {};
}

void LedgerSequence::append(int round, Ledger snapshot) {
    const int expected_floor = snaps_.empty() ? 0 : snaps_.back().first + 1;
    if (snaps_.empty() && round != 0)
        throw Error(errc::validation_error, "ledger sequence must start at round 0");
    if (!snaps_.empty() && round < expected_floor)
        throw Error(errc::validation_error,
                    "round " + std::to_string(round) + " does not increase on " +
                        std::to_string(snaps_.back().first));
    snaps_.emplace_back(round, std::move(snapshot));
}

} // namespace tegsim
