#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tegsim/engine.hpp"

namespace tegsim {

// Pairwise exchange rates between layers. A missing cell means the pair does
// not exchange at all — deliberately a distinct state from any numeric rate,
// so "can't trade" can never be confused with "trades at a huge rate".
// Diagonal cells are fixed at 1.
class FungibilityMatrix {
public:
    explicit FungibilityMatrix(std::vector<std::string> layers);

    int size() const { return static_cast<int>(layers_.size()); }
    const std::vector<std::string>& layers() const { return layers_; }
    int index_of(const std::string& layer) const; // throws unknown_layer

    void set(int from, int to, double rate);
    void set(const std::string& from, const std::string& to, double rate);
    void clear(int from, int to); // back to unavailable

    std::optional<double> rate(int from, int to) const;
    std::optional<double> rate(const std::string& from, const std::string& to) const;

    struct Verdict {
        bool ok = true;
        std::string detail;
    };

    // Diagonal exactly 1, every present rate finite and > 0.
    Verdict validate() const;

private:
    std::size_t cell(int i, int j) const;
    std::vector<std::string> layers_;
    std::vector<std::optional<double>> rates_;
};

// One player's balances across every layer, zero where they hold no slot.
struct PortfolioVector {
    std::string player;
    std::vector<std::pair<std::string, double>> holdings; // (layer, balance), layer order given
};

PortfolioVector portfolio(const std::string& player, const std::vector<LayerState>& states);

// True when the layer's player set intersects no other layer's.
bool is_isolated(const std::string& layer,
                 const std::map<std::string, std::set<std::string>>& players_by_layer);

// Pairs (i, j) where an isolated layer nevertheless has a posted rate — a
// state the trading rules cannot produce, reported for audit rather than
// silently repaired.
std::vector<std::pair<int, int>> isolation_rate_conflicts(
    const FungibilityMatrix& rho,
    const std::map<std::string, std::set<std::string>>& players_by_layer);

// |rho_ij * rho_ji - 1| <= tol; false when either direction is unavailable.
bool local_equilibrium(const FungibilityMatrix& rho, int i, int j, double tol = 1e-9);

// The exchange-rate structure as a directed graph: an edge per available
// off-diagonal rate, optionally annotated with per-swap transaction costs
// kappa and mu (bits). kappa == 0 means "no edge", so a posted rate with a
// zero kappa is flagged as inconsistent input.
struct FungibilityGraph {
    struct Edge {
        int from, to;
        double rate;
        std::optional<double> kappa;
        std::optional<double> mu;
    };
    std::vector<std::string> layers;
    std::vector<Edge> edges;
};

using CostMatrix = std::vector<std::vector<double>>;

FungibilityGraph fungibility_graph(const FungibilityMatrix& rho,
                                   const std::optional<CostMatrix>& kappa = {},
                                   const std::optional<CostMatrix>& mu = {});

// A cycle of layer indices (first vertex repeated implicitly) whose rate
// product exceeds 1 + tol: free money by trading around the loop.
struct ArbitrageCycle {
    std::vector<int> cycle;
    double gain;
};

// Negative-cycle search over edge weights -log(rate), Bellman-Ford style.
// Returns the first verified cycle, rotated to start at its smallest vertex;
// nullopt when no cycle beats 1 + tol.
std::optional<ArbitrageCycle> find_arbitrage(const FungibilityGraph& graph, double tol = 1e-9);

// The structural dichotomy for arbitrage-minimising systems: either the
// undirected exchange graph is a forest, or every swap cost mu is zero.
// Anything else is reported with a witness cycle (one crossing a positive-mu
// edge when such a cycle exists).
enum class TheoremBStatus { acyclic, zero_mu, counterexample };

struct TheoremBReport {
    TheoremBStatus status;
    std::vector<int> cycle; // populated for counterexamples
};

TheoremBReport check_theorem_b(const FungibilityGraph& graph);

// Atomically trades `amount` of layer A (payer -> payee) against
// amount * rate of layer B (payee -> payer). Both legs are validated before
// either is applied; each leg conserves its own layer's supply. Players
// missing a slot on their receiving side are added with balance zero.
std::pair<LayerState, LayerState> cross_layer_swap(const LayerState& layer_a,
                                                   const LayerState& layer_b,
                                                   const std::string& payer,
                                                   const std::string& payee, double amount,
                                                   std::optional<double> rate);

} // namespace tegsim
