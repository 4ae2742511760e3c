#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tegsim/engine.hpp"
#include "tegsim/rng.hpp"

namespace tegsim {

// --- Surfing game (PageRank as a token game) --------------------------------

struct PageRankSpec {
    int pages = 0;
    // (from, to) -> link count; counts >= 1, no self-links.
    std::map<std::pair<int, int>, long> links;
    double damping = 0.85; // probability of following a link instead of teleporting
    // A page with no outlinks normally aborts the build (dangling_page); with
    // this set its surfers spread uniformly instead.
    bool dangling_uniform = false;
};

struct PageRankGame {
    TransferMatrix matrix;  // damped link shares plus the uniform teleport mix
    MintBurnVector inflow;  // zero: teleporting is inside the matrix, supply stays 1
    LayerState start;       // uniform 1/n over pages p0..p{n-1}
};

// Column j mixes p * (links out of page j, each weighted by its share of j's
// outdegree) with the uniform teleport (1-p)/n to every page. The mix keeps
// every column summing to 1, so the open-game step with the zero inflow
// reproduces x' = p*L*x + (1-p)/n exactly and conserves the unit supply.
PageRankGame build_pagerank_game(const PageRankSpec& spec);

struct PageRankResult {
    LayerState state;
    int iterations;
    bool converged;
};

// Iterates the game until successive states differ by less than `tol` in L1.
PageRankResult pagerank_stationary(const PageRankSpec& spec, double tol = 1e-12,
                                   int max_iter = 200);

// --- Two-player basic-income game -------------------------------------------

struct UbiSpec {
    double omega = 0;   // total (fixed) supply, all in the treasury at round 0
    double delta = 0;   // share of omega issued to the citizen every round
    double epsilon = 0; // share of the citizen's holdings spent back per round
};

// The per-round matrix depends on the treasury's current balance x_A:
// the treasury pays f = delta*omega (treasury_depleted when f > x_A), the
// citizen returns epsilon of their stack.
TransferMatrix ubi_matrix(double treasury_balance, const UbiSpec& spec);

LayerState ubi_initial_state(const UbiSpec& spec); // layer "ubi": A = omega, B = 0
RoundProvider ubi_provider(const UbiSpec& spec);

// Exact trajectory: citizen holds f*(1-(1-eps)^j)/eps after j rounds (j*f in
// the eps->0 limit), treasury holds the exact complement. The geometric factor
// is evaluated via expm1/log1p: the naive power form loses ~5e-9 absolute to
// cancellation at omega ~ 1e6, which is above the accuracy this function is
// relied on for.
std::pair<double, double> ubi_closed_form(int j, const UbiSpec& spec); // (treasury, citizen)

// --- Payment-channel round trip ----------------------------------------------

struct LightningPlan {
    std::map<std::string, double> commitments;  // parent players -> amounts
    std::vector<TransferMatrix> sub_rounds;     // applied in order, closed steps
    std::string channel_label = "chan";
};

struct LightningResult {
    LayerState main_final;
    LayerState parent_committed; // the parent right after the channel opened
    LedgerSequence sub_sequence; // sub-layer snapshots, rounds 0..k
    LayerState sub_final;
};

// commit -> run the sub-layer -> settle. The sub-layer's supply can never
// exceed the parent's (checked every round), and the parent's total supply is
// identical before and after the trip.
LightningResult run_lightning_scenario(const LayerState& main, const LightningPlan& plan);

// A valid random matrix: every column keeps a strictly positive self-loop and
// spreads the rest over at most `max_offdiag` other slots. Weights come only
// from the supplied generator, so one seed pins the matrix bit-for-bit.
TransferMatrix random_transfer_matrix(int n, Rng& rng, int max_offdiag = 4);

// --- Personal-token trust network ("one coin per player") --------------------

// Undirected simple trust relations between players.
class TrustGraph {
public:
    void add_vertex(const std::string& v); // idempotent
    void add_edge(const std::string& a, const std::string& b); // no self-trust; adds vertices

    bool has_vertex(const std::string& v) const;
    bool has_edge(const std::string& a, const std::string& b) const;
    int degree(const std::string& v) const; // throws unknown_player
    long degree_sum() const { return 2 * edge_count_; }
    long edge_count() const { return edge_count_; }
    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int positive_degree_count() const; // vertices a newcomer could be drawn to
    std::vector<std::string> vertices() const; // sorted
    const std::set<std::string>& neighbours(const std::string& v) const;
    bool connected() const;

    // One degree-proportional draw over the sorted vertex order. Integer
    // cumulative weights, so there are no floating-point bucket edges; walks
    // the adjacency map in place to keep draws cheap on big graphs.
    const std::string& sample_by_degree(Rng& rng) const; // throws empty_graph

private:
    std::map<std::string, std::set<std::string>> adj_;
    long edge_count_ = 0;
};

// Chance that a newcomer attaches to v: degree(v) / sum of all degrees.
double attachment_probability(const TrustGraph& g, const std::string& v);

// One degree-proportional draw. Integer cumulative weights over the sorted
// vertex order — no floating-point thresholds to go wrong at bucket edges.
std::string sample_attachment(const TrustGraph& g, Rng& rng);

// m distinct degree-proportional picks (redrawing duplicates), capped at the
// number of attachable vertices.
std::vector<std::string> preferential_targets(const TrustGraph& g, int m, Rng& rng);

struct CirclesState {
    int round = 0;
    int attach_m = 2;
    long next_id = 0;                        // feeds the uN names of newcomers
    TrustGraph trust;
    std::vector<std::string> players;        // join order
    std::map<std::string, LayerState> layers; // one personal token per player
};

// Players may trade inside a round; the default policy trades nothing.
using SwapPolicy = std::function<void(CirclesState&, Rng&)>;

// Seeds the game from a connected trust graph; every seed player starts with
// an empty personal layer (first issuance lands in round 1).
CirclesState circles_seed(const std::vector<std::pair<std::string, std::string>>& trust_edges,
                          int attach_m = 2);

// One round: +1 token minted to every owner in their own layer, then one
// newcomer joins, trusting `attach_m` existing players picked preferentially
// by degree, then the swap policy (if any) runs.
void circles_round(CirclesState& state, std::uint64_t seed, const SwapPolicy& policy = {});

// --- Who-holds-what bipartite view -------------------------------------------

struct OwnershipEdge {
    std::string player;
    std::string token; // a layer id
    double weight;     // positive balance
};

struct OwnershipGraph {
    std::vector<std::string> players; // sorted union of all slot labels
    std::vector<std::string> tokens;  // sorted layer ids
    std::vector<OwnershipEdge> edges; // player x holds weight of token y
};

OwnershipGraph ownership_bipartite(const std::vector<LayerState>& states);

// Degree -> fraction of vertices, over all vertices including isolated ones.
std::map<int, double> degree_distribution(const TrustGraph& g);

} // namespace tegsim
