#include "tegsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace tegsim {

LayerState::LayerState(std::string layer_id,
                       const std::vector<std::pair<std::string, double>>& players)
    : layer_id_(std::move(layer_id)) {
    if (layer_id_.empty() || layer_id_.find_first_of(",\"\r\n") != std::string::npos)
        throw Error(errc::validation_error, "bad layer id '" + layer_id_ + "'");
    balances_.reserve(players.size());
    labels_.reserve(players.size());
    for (const auto& [label, balance] : players) add_player(label, balance);
}

const std::string& LayerState::label(int slot) const {
    if (slot < 0 || slot >= slots())
        throw Error(errc::unknown_player, "slot " + std::to_string(slot) + " out of range");
    return labels_[static_cast<std::size_t>(slot)];
}

int LayerState::slot(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw Error(errc::unknown_player, "'" + label + "' not in layer " + layer_id_);
    return it->second;
}

bool LayerState::has(const std::string& label) const { return index_.count(label) != 0; }

double LayerState::balance(int slot) const {
    if (slot < 0 || slot >= slots())
        throw Error(errc::unknown_player, "slot " + std::to_string(slot) + " out of range");
    return balances_[static_cast<std::size_t>(slot)];
}

double LayerState::balance(const std::string& label) const { return balance(slot(label)); }

double LayerState::supply() const {
    double sum = 0.0;
    for (double b : balances_) sum += b;
    return sum;
}

void LayerState::add_player(const std::string& label, double balance) {
    Ledger::check_label(label);
    if (index_.count(label))
        throw Error(errc::validation_error, "duplicate player '" + label + "'");
    if (!(balance >= 0.0))
        throw Error(errc::validation_error, "negative starting balance for '" + label + "'");
    index_[label] = slots();
    labels_.push_back(label);
    balances_.push_back(balance);
}

LayerState LayerState::with_balances(std::vector<double> balances, int round) const {
    if (balances.size() != balances_.size())
        throw Error(errc::dimension_mismatch, "balance vector size changed");
    for (double b : balances)
        if (!(b >= 0.0))
            throw Error(errc::validation_error, "negative balance in successor state");
    LayerState next(*this);
    next.balances_ = std::move(balances);
    next.round_ = round;
    return next;
}

Ledger LayerState::to_ledger() const {
    Ledger out;
    for (int i = 0; i < slots(); ++i)
        out.set(labels_[static_cast<std::size_t>(i)], balances_[static_cast<std::size_t>(i)]);
    return out;
}

void TransactionLog::append(TransactionRecord record) {
    if (!(record.amount > 0.0) || !std::isfinite(record.amount))
        throw Error(errc::validation_error,
                    "transaction amount must be positive, got " + std::to_string(record.amount));
    Ledger::check_label(record.sender);
    Ledger::check_label(record.receiver);
    if (!records_.empty() && record.round < records_.back().round)
        throw Error(errc::validation_error, "transaction rounds must not decrease");
    records_.push_back(std::move(record));
}

TransactionLog TransactionLog::for_round(int round) const {
    TransactionLog out;
    for (const auto& r : records_)
        if (r.round == round) out.append(r);
    return out;
}

double token_supply(const LayerState& state) { return state.supply(); }

TransferMatrix::Verdict validate_transfer_matrix(const TransferMatrix& matrix, double tol) {
    return matrix.validate(tol);
}

static void require_step_inputs(const LayerState& state, const TransferMatrix& matrix) {
    if (matrix.size() != state.slots())
        throw Error(errc::dimension_mismatch,
                    "matrix is " + std::to_string(matrix.size()) + "-dimensional but layer '" +
                        state.layer_id() + "' has " + std::to_string(state.slots()) + " slots");
    if (auto v = matrix.validate(); !v.ok) throw Error(errc::invalid_matrix, v.detail);
}

LayerState step_closed(const LayerState& state, const TransferMatrix& matrix) {
    require_step_inputs(state, matrix);
    return state.with_balances(matrix.apply(state.balances()), state.round() + 1);
}

LayerState step_open(const LayerState& state, const TransferMatrix& matrix,
                     const MintBurnVector& deltas) {
    require_step_inputs(state, matrix);
    if (deltas.deltas.size() != static_cast<std::size_t>(state.slots()))
        throw Error(errc::dimension_mismatch, "mint/burn vector size " +
                                                  std::to_string(deltas.deltas.size()) +
                                                  " against " + std::to_string(state.slots()) +
                                                  " slots");

    // A burn may take at most what the slot keeps through its own self-loop;
    // this is checkable before the transfer and guarantees a non-negative
    // outcome regardless of the rest of the column.
    for (int i = 0; i < state.slots(); ++i) {
        const double floor_i = -state.balance(i) * matrix.diagonal(i);
        const double d = deltas.deltas[static_cast<std::size_t>(i)];
        if (!std::isfinite(d) || d < floor_i)
            throw Error(errc::negative_balance_risk,
                        "delta " + std::to_string(d) + " for slot " + std::to_string(i) +
                            " below the retained-balance floor " + std::to_string(floor_i));
    }

    std::vector<double> next = matrix.apply(state.balances());
    for (int i = 0; i < state.slots(); ++i) {
        auto k = static_cast<std::size_t>(i);
        next[k] += deltas.deltas[k];
        // The floor check above makes the exact result non-negative; only the
        // last rounding step can dip below zero, and only by an ulp.
        if (next[k] < 0.0) next[k] = 0.0;
    }
    return state.with_balances(std::move(next), state.round() + 1);
}

RunTrace run_traced(const LayerState& initial, const RoundProvider& provider, int rounds) {
    if (rounds < 0) throw Error(errc::validation_error, "negative round count");
    RunTrace trace{LedgerSequence{}, initial, {}};
    trace.sequence.append(0, initial.to_ledger());
    LayerState current = initial;
    for (int r = 0; r < rounds; ++r) {
        try {
            RoundPlan plan = provider(r, current);
            for (const std::string& joiner : plan.joiners) current.add_player(joiner);
            current = plan.deltas ? step_open(current, plan.matrix, *plan.deltas)
                                  : step_closed(current, plan.matrix);
            trace.matrices.push_back(std::move(plan.matrix));
        } catch (const Error& e) {
            throw Error(e.code(), "round " + std::to_string(r) + ": " + e.what());
        }
        trace.sequence.append(r + 1, current.to_ledger());
    }
    trace.final_state = std::move(current);
    return trace;
}

LedgerSequence run(const LayerState& initial, const RoundProvider& provider, int rounds) {
    return run_traced(initial, provider, rounds).sequence;
}

ChannelCommit commit_sublayer(const LayerState& parent,
                              const std::map<std::string, double>& commitments,
                              const std::string& channel_label,
                              const std::string& sub_layer_id) {
    if (commitments.empty())
        throw Error(errc::validation_error, "cannot open a channel with no commitments");
    if (parent.has(channel_label))
        throw Error(errc::validation_error,
                    "channel label '" + channel_label + "' collides with a player");

    double committed = 0.0;
    for (const auto& [player, amount] : commitments) {
        if (!(amount > 0.0) || !std::isfinite(amount))
            throw Error(errc::validation_error,
                        "commitment for '" + player + "' must be positive");
        const double held = parent.balance(player); // throws unknown_player
        if (amount > held)
            throw Error(errc::insufficient_balance,
                        "'" + player + "' commits " + std::to_string(amount) + " but holds " +
                            std::to_string(held));
        committed += amount;
    }

    std::vector<double> balances = parent.balances();
    for (const auto& [player, amount] : commitments)
        balances[static_cast<std::size_t>(parent.slot(player))] -= amount;

    LayerState next_parent = parent.with_balances(std::move(balances), parent.round() + 1);
    next_parent.add_player(channel_label, committed);

    std::vector<std::pair<std::string, double>> sub_players(commitments.begin(),
                                                            commitments.end());
    LayerState sub(sub_layer_id.empty() ? channel_label : sub_layer_id, sub_players);
    return {std::move(next_parent), std::move(sub), channel_label};
}

LayerState settle_sublayer(const LayerState& parent, const std::string& channel_label,
                           const LayerState& sub_final) {
    const int chan = parent.slot(channel_label); // throws unknown_player
    const double channel_balance = parent.balance(chan);
    const double sub_supply = sub_final.supply();
    if (std::fabs(sub_supply - channel_balance) > 1e-9)
        throw Error(errc::supply_mismatch,
                    "sub-layer supply " + std::to_string(sub_supply) +
                        " does not match channel balance " + std::to_string(channel_balance));

    // Drop the channel slot, credit everyone's final sub balance back.
    std::vector<std::pair<std::string, double>> players;
    players.reserve(static_cast<std::size_t>(parent.slots()) - 1);
    for (int i = 0; i < parent.slots(); ++i)
        if (i != chan) players.emplace_back(parent.label(i), parent.balance(i));

    LayerState settled(parent.layer_id(), players);
    std::vector<double> balances = settled.balances();
    for (int i = 0; i < sub_final.slots(); ++i) {
        const std::string& who = sub_final.label(i);
        if (!settled.has(who))
            throw Error(errc::unknown_player,
                        "sub-layer player '" + who + "' does not exist in the parent layer");
        balances[static_cast<std::size_t>(settled.slot(who))] += sub_final.balance(i);
    }
    return settled.with_balances(std::move(balances), parent.round() + 1);
}

TransferMatrix build_matrix_from_transactions(const TransactionLog& log,
                                              const LayerState& holdings) {
    const int n = holdings.slots();
    // Aggregate flows per sender; validate labels up front.
    std::vector<std::map<int, double>> outgoing(static_cast<std::size_t>(n));
    std::vector<double> spent(static_cast<std::size_t>(n), 0.0);
    for (const TransactionRecord& tx : log) {
        const int from = holdings.slot(tx.sender); // throws unknown_player
        const int to = holdings.slot(tx.receiver);
        spent[static_cast<std::size_t>(from)] += tx.amount;
        if (to != from) outgoing[static_cast<std::size_t>(from)][to] += tx.amount;
    }

    TransferMatrix matrix(n);
    for (int j = 0; j < n; ++j) {
        const double held = holdings.balance(j);
        const double out = spent[static_cast<std::size_t>(j)];
        if (out > held)
            throw Error(errc::overspend, "'" + holdings.label(j) + "' sent " +
                                             std::to_string(out) + " while holding " +
                                             std::to_string(held));
        if (held == 0.0 || outgoing[static_cast<std::size_t>(j)].empty()) {
            matrix.set(j, j, 1.0); // idle or empty-handed senders keep everything
            continue;
        }
        double moved = 0.0;
        for (const auto& [to, amount] : outgoing[static_cast<std::size_t>(j)]) {
            const double share = amount / held;
            matrix.set(to, j, share);
            moved += share;
        }
        const double kept = 1.0 - moved;
        // Senders that spent everything get no self-loop; a sub-ulp negative
        // remainder is rounding noise from the divisions above.
        if (kept > 1e-12) matrix.set(j, j, kept);
    }
    return matrix;
}

} // namespace tegsim
