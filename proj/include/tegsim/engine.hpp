#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tegsim/ledger.hpp"
#include "tegsim/matrix.hpp"

namespace tegsim {

// One layer (token type) mid-game: a round counter plus per-slot balances.
// Slots are append-only and keep their index for the life of the state, so a
// TransferMatrix built against this state stays aligned with it.
class LayerState {
public:
    LayerState(std::string layer_id, const std::vector<std::pair<std::string, double>>& players);

    const std::string& layer_id() const { return layer_id_; }
    int round() const { return round_; }

    int slots() const { return static_cast<int>(balances_.size()); }
    const std::string& label(int slot) const;
    int slot(const std::string& label) const; // throws unknown_player
    bool has(const std::string& label) const;
    double balance(int slot) const;
    double balance(const std::string& label) const;
    const std::vector<double>& balances() const { return balances_; }

    double supply() const;

    // New slot at the end, balance >= 0, label unique and CSV-safe.
    void add_player(const std::string& label, double balance = 0.0);

    // Same slots, new balances/round — how the engine emits successor states.
    LayerState with_balances(std::vector<double> balances, int round) const;

    Ledger to_ledger() const;

private:
    std::string layer_id_;
    int round_ = 0;
    std::vector<double> balances_;
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
};

// Per-slot mint (positive) / burn (negative) amounts applied after the
// transfer. Burns are capped by what the slot provably retains: delta_i must
// be >= -balance_i * w_ii, which keeps every outcome non-negative no matter
// what the rest of the matrix does.
struct MintBurnVector {
    std::vector<double> deltas;

    static MintBurnVector zeros(int n) { return MintBurnVector{std::vector<double>(n, 0.0)}; }
};

struct TransactionRecord {
    int round;
    std::string sender;
    std::string receiver;
    double amount; // > 0
};

// Append-only trade history; rounds need not be contiguous but must not
// decrease. Amounts are strictly positive.
class TransactionLog {
public:
    void append(TransactionRecord record);

    std::size_t size() const { return records_.size(); }
    const std::vector<TransactionRecord>& records() const { return records_; }
    auto begin() const { return records_.begin(); }
    auto end() const { return records_.end(); }

    TransactionLog for_round(int round) const;

private:
    std::vector<TransactionRecord> records_;
};

double token_supply(const LayerState& state);

TransferMatrix::Verdict validate_transfer_matrix(const TransferMatrix& matrix, double tol = 1e-9);

// x' = W x. Conserves supply; round advances by one.
LayerState step_closed(const LayerState& state, const TransferMatrix& matrix);

// x' = W x + y, the open-game step. Rejects deltas below the -balance*w_ii
// floor (negative_balance_risk) before touching anything; the result is
// clamped at zero only against sub-ulp rounding, never against real debt.
LayerState step_open(const LayerState& state, const TransferMatrix& matrix,
                     const MintBurnVector& deltas);

// What one round needs: a matrix sized for the state *after* joiners are
// appended (each joiner enters with balance 0), plus optional mint/burn.
struct RoundPlan {
    TransferMatrix matrix;
    std::optional<MintBurnVector> deltas;
    std::vector<std::string> joiners;
};

using RoundProvider = std::function<RoundPlan(int round, const LayerState& current)>;

struct RunTrace {
    LedgerSequence sequence;            // snapshots at rounds 0..rounds
    LayerState final_state;
    std::vector<TransferMatrix> matrices; // the matrix applied at each round
};

// Drives `rounds` steps, asking the provider for each round's plan. Snapshot 0
// is the initial state; step errors are rethrown with the round prepended.
RunTrace run_traced(const LayerState& initial, const RoundProvider& provider, int rounds);
LedgerSequence run(const LayerState& initial, const RoundProvider& provider, int rounds);

// Opens a payment channel: deducts each commitment from the parent layer and
// parks the sum in a fresh `channel_label` slot; the sub-layer starts with
// exactly the committed balances. Parent supply is unchanged.
struct ChannelCommit {
    LayerState parent; // with the channel slot appended
    LayerState sub;    // committers only, round 0
    std::string channel_label;
};

ChannelCommit commit_sublayer(const LayerState& parent,
                              const std::map<std::string, double>& commitments,
                              const std::string& channel_label = "chan",
                              const std::string& sub_layer_id = "");

// Closes the channel: requires the sub-layer's supply to equal the channel
// balance within 1e-9, removes the channel slot and credits every sub player's
// final balance back to the parent. Parent players absent from the sub-layer
// are untouched (they implicitly held zero there).
LayerState settle_sublayer(const LayerState& parent, const std::string& channel_label,
                           const LayerState& sub_final);

// Reconstructs the empirical transfer matrix of one round of trades: column j
// gets amount/balance_j per receiver plus the self-loop that closes the column
// to 1. Senders that moved nothing (or hold nothing) keep a self-loop of 1.
TransferMatrix build_matrix_from_transactions(const TransactionLog& log,
                                              const LayerState& holdings);

} // namespace tegsim
