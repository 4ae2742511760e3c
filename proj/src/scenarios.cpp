#include "tegsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "tegsim/errors.hpp"

namespace tegsim {

// --- surfing game ------------------------------------------------------------

static void check_pagerank_spec(const PageRankSpec& spec) {
    if (spec.pages < 1) throw Error(errc::validation_error, "page count must be >= 1");
    if (!(spec.damping >= 0.0 && spec.damping <= 1.0))
        throw Error(errc::validation_error, "damping must lie in [0, 1]");
    for (const auto& [key, count] : spec.links) {
        const auto [from, to] = key;
        if (from < 0 || from >= spec.pages || to < 0 || to >= spec.pages)
            throw Error(errc::validation_error, "link endpoint out of range");
        if (from == to)
            throw Error(errc::validation_error,
                        "self-link on page " + std::to_string(from) + " (diagonal must stay zero)");
        if (count < 1) throw Error(errc::validation_error, "link count must be >= 1");
    }
}

PageRankGame build_pagerank_game(const PageRankSpec& spec) {
    check_pagerank_spec(spec);
    const int n = spec.pages;
    const double p = spec.damping;

    std::vector<long> outdeg(n, 0);
    for (const auto& [key, count] : spec.links) outdeg[key.first] += count;

    TransferMatrix w(n);
    const double teleport = (1.0 - p) / n;
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) {
        if (outdeg[j] == 0) {
            if (!spec.dangling_uniform)
                throw Error(errc::dangling_page, "page " + std::to_string(j) + " has no outlinks");
            // Surfers on a dangling page jump uniformly; the p/n link share and
            // the (1-p)/n teleport collapse to the same 1/n.
            for (int i = 0; i < n; ++i) w.set(i, j, 1.0 / n);
            continue;
        }
        std::fill(col.begin(), col.end(), teleport);
        for (const auto& [key, count] : spec.links) {
            if (key.first != j) continue;
            col[key.second] += p * (static_cast<double>(count) / static_cast<double>(outdeg[j]));
        }
        for (int i = 0; i < n; ++i)
            if (col[i] > 0.0) w.set(i, j, col[i]);
    }

    std::vector<std::pair<std::string, double>> players;
    players.reserve(n);
    for (int i = 0; i < n; ++i) players.emplace_back("p" + std::to_string(i), 1.0 / n);

    PageRankGame game{std::move(w), MintBurnVector::zeros(n), LayerState("pagerank", players)};
    const auto verdict = game.matrix.validate();
    if (!verdict.ok) throw Error(errc::invalid_matrix, verdict.detail);
    return game;
}

PageRankResult pagerank_stationary(const PageRankSpec& spec, double tol, int max_iter) {
    if (!(tol > 0.0)) throw Error(errc::validation_error, "tolerance must be positive");
    if (max_iter < 1) throw Error(errc::validation_error, "max_iter must be >= 1");
    PageRankGame game = build_pagerank_game(spec);
    LayerState state = std::move(game.start);
    for (int it = 1; it <= max_iter; ++it) {
        LayerState next = step_closed(state, game.matrix);
        double diff = 0.0;
        for (int i = 0; i < state.slots(); ++i) diff += std::abs(next.balance(i) - state.balance(i));
        state = std::move(next);
        if (diff < tol) return PageRankResult{std::move(state), it, true};
    }
    return PageRankResult{std::move(state), max_iter, false};
}

// --- basic-income game --------------------------------------------------------

static void check_ubi_spec(const UbiSpec& spec) {
    if (!(spec.omega >= 0.0) || !std::isfinite(spec.omega))
        throw Error(errc::validation_error, "omega must be finite and >= 0");
    if (!(spec.delta >= 0.0 && spec.delta <= 1.0))
        throw Error(errc::validation_error, "delta must lie in [0, 1]");
    if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0))
        throw Error(errc::validation_error, "epsilon must lie in [0, 1]");
}

TransferMatrix ubi_matrix(double treasury_balance, const UbiSpec& spec) {
    check_ubi_spec(spec);
    if (!(treasury_balance >= 0.0) || !std::isfinite(treasury_balance))
        throw Error(errc::validation_error, "treasury balance must be finite and >= 0");

    const double f = spec.delta * spec.omega;
    if (f > treasury_balance)
        throw Error(errc::treasury_depleted, "round income exceeds the treasury balance");

    TransferMatrix w(2);
    if (f == 0.0) {
        w.set(0, 0, 1.0);
    } else {
        const double q = f / treasury_balance; // f <= balance, so q <= 1
        w.set(1, 0, q);
        const double keep = 1.0 - q;
        if (keep > 0.0) w.set(0, 0, keep);
    }
    if (spec.epsilon == 0.0) {
        w.set(1, 1, 1.0);
    } else if (spec.epsilon == 1.0) {
        w.set(0, 1, 1.0);
    } else {
        w.set(0, 1, spec.epsilon);
        w.set(1, 1, 1.0 - spec.epsilon);
    }
    return w;
}

LayerState ubi_initial_state(const UbiSpec& spec) {
    check_ubi_spec(spec);
    return LayerState("ubi", {{"A", spec.omega}, {"B", 0.0}});
}

RoundProvider ubi_provider(const UbiSpec& spec) {
    check_ubi_spec(spec);
    return [spec](int, const LayerState& current) {
        return RoundPlan{ubi_matrix(current.balance(0), spec), std::nullopt, {}};
    };
}

std::pair<double, double> ubi_closed_form(int j, const UbiSpec& spec) {
    check_ubi_spec(spec);
    if (j < 0) throw Error(errc::validation_error, "round index must be >= 0");
    const double f = spec.delta * spec.omega;
    double citizen;
    if (j == 0 || f == 0.0) {
        citizen = 0.0;
    } else if (spec.epsilon == 0.0) {
        citizen = f * static_cast<double>(j);
    } else if (spec.epsilon == 1.0) {
        citizen = f;
    } else {
        // f * (1 - (1-eps)^j) / eps, with the outer subtraction fused into
        // expm1 so small eps and large j do not cancel.
        const double one_minus_pow = -std::expm1(j * std::log1p(-spec.epsilon));
        citizen = f * one_minus_pow / spec.epsilon;
    }
    return {spec.omega - citizen, citizen};
}

// --- payment-channel round trip ------------------------------------------------

LightningResult run_lightning_scenario(const LayerState& main, const LightningPlan& plan) {
    ChannelCommit commit = commit_sublayer(main, plan.commitments, plan.channel_label);
    const double parent_supply = commit.parent.supply();

    LedgerSequence seq;
    seq.append(0, commit.sub.to_ledger());
    LayerState sub = std::move(commit.sub);
    for (const TransferMatrix& m : plan.sub_rounds) {
        sub = step_closed(sub, m);
        if (sub.supply() > parent_supply + 1e-9)
            throw Error(errc::supply_mismatch, "sub-layer supply exceeds the parent layer's");
        seq.append(sub.round(), sub.to_ledger());
    }

    LayerState settled = settle_sublayer(commit.parent, plan.channel_label, sub);
    return LightningResult{std::move(settled), std::move(commit.parent), std::move(seq),
                           std::move(sub)};
}

TransferMatrix random_transfer_matrix(int n, Rng& rng, int max_offdiag) {
    if (n < 1) throw Error(errc::validation_error, "matrix size must be >= 1");
    if (max_offdiag < 0) throw Error(errc::validation_error, "max_offdiag must be >= 0");
    TransferMatrix w(n);
    std::vector<int> targets;
    for (int j = 0; j < n; ++j) {
        const int cap = std::min<int>(max_offdiag, n - 1);
        const int k = cap == 0 ? 0 : static_cast<int>(rng.uniform_int(0, cap));
        targets.clear();
        while (static_cast<int>(targets.size()) < k) {
            const int row = static_cast<int>(rng.uniform_int(0, n - 1));
            if (row == j) continue;
            if (std::find(targets.begin(), targets.end(), row) != targets.end()) continue;
            targets.push_back(row);
        }
        // The 1e-3 floor keeps every weight strictly positive (uniform01 can
        // return exactly 0), so the stored pattern is always a valid matrix.
        double self = 1e-3 + rng.uniform01();
        double sum = self;
        std::vector<double> raw(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t) {
            raw[t] = 1e-3 + rng.uniform01();
            sum += raw[t];
        }
        w.set(j, j, self / sum);
        for (std::size_t t = 0; t < targets.size(); ++t) w.set(targets[t], j, raw[t] / sum);
    }
    return w;
}

// --- trust graph ----------------------------------------------------------------

void TrustGraph::add_vertex(const std::string& v) {
    Ledger::check_label(v);
    adj_.emplace(v, std::set<std::string>{});
}

void TrustGraph::add_edge(const std::string& a, const std::string& b) {
    if (a == b) throw Error(errc::validation_error, "self-trust edge on '" + a + "'");
    add_vertex(a);
    add_vertex(b);
    if (adj_[a].insert(b).second) {
        adj_[b].insert(a);
        ++edge_count_;
    }
}

bool TrustGraph::has_vertex(const std::string& v) const { return adj_.count(v) != 0; }

bool TrustGraph::has_edge(const std::string& a, const std::string& b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) != 0;
}

int TrustGraph::degree(const std::string& v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(errc::unknown_player, "no vertex '" + v + "'");
    return static_cast<int>(it->second.size());
}

std::vector<std::string> TrustGraph::vertices() const {
    std::vector<std::string> out;
    out.reserve(adj_.size());
    for (const auto& [v, nbrs] : adj_) out.push_back(v);
    return out;
}

const std::set<std::string>& TrustGraph::neighbours(const std::string& v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(errc::unknown_player, "no vertex '" + v + "'");
    return it->second;
}

int TrustGraph::positive_degree_count() const {
    int count = 0;
    for (const auto& [v, nbrs] : adj_)
        if (!nbrs.empty()) ++count;
    return count;
}

bool TrustGraph::connected() const {
    if (adj_.size() <= 1) return true;
    std::set<std::string> seen{adj_.begin()->first};
    std::deque<std::string> queue{adj_.begin()->first};
    while (!queue.empty()) {
        const std::string v = queue.front();
        queue.pop_front();
        for (const auto& nbr : adj_.at(v))
            if (seen.insert(nbr).second) queue.push_back(nbr);
    }
    return seen.size() == adj_.size();
}

double attachment_probability(const TrustGraph& g, const std::string& v) {
    const int deg = g.degree(v);
    const long sum = g.degree_sum();
    if (sum == 0) throw Error(errc::empty_graph, "no trust edges to attach by");
    return static_cast<double>(deg) / static_cast<double>(sum);
}

const std::string& TrustGraph::sample_by_degree(Rng& rng) const {
    const long sum = degree_sum();
    if (sum == 0) throw Error(errc::empty_graph, "no trust edges to attach by");
    const std::int64_t r = rng.uniform_int(0, sum - 1);
    std::int64_t acc = 0;
    for (const auto& [v, nbrs] : adj_) {
        acc += static_cast<std::int64_t>(nbrs.size());
        if (r < acc) return v;
    }
    // r < degree_sum and the degrees sum to degree_sum, so this is unreachable.
    throw Error(errc::empty_graph, "degree sum inconsistent");
}

std::string sample_attachment(const TrustGraph& g, Rng& rng) { return g.sample_by_degree(rng); }

std::vector<std::string> preferential_targets(const TrustGraph& g, int m, Rng& rng) {
    if (m < 1) throw Error(errc::validation_error, "target count must be >= 1");
    const long attachable = g.positive_degree_count();
    if (attachable == 0) throw Error(errc::empty_graph, "no trust edges to attach by");

    const long want = std::min<long>(m, attachable);
    std::set<std::string> picked;
    std::vector<std::string> out;
    while (static_cast<long>(out.size()) < want) {
        std::string v = sample_attachment(g, rng);
        if (picked.insert(v).second) out.push_back(std::move(v));
    }
    return out;
}

// --- personal-token growth game ---------------------------------------------------

CirclesState circles_seed(const std::vector<std::pair<std::string, std::string>>& trust_edges,
                          int attach_m) {
    if (attach_m < 1) throw Error(errc::validation_error, "attach_m must be >= 1");
    CirclesState state;
    state.attach_m = attach_m;
    for (const auto& [a, b] : trust_edges) state.trust.add_edge(a, b);
    if (state.trust.vertex_count() == 0)
        throw Error(errc::empty_graph, "seed trust graph has no players");
    if (!state.trust.connected())
        throw Error(errc::validation_error, "seed trust graph must be connected");
    for (const auto& p : state.trust.vertices()) {
        state.players.push_back(p);
        state.layers.emplace(p, LayerState(p, {{p, 0.0}}));
    }
    return state;
}

void circles_round(CirclesState& state, std::uint64_t seed, const SwapPolicy& policy) {
    Rng rng(seed);

    // Every owner mints one unit of their own token: W = I, y = +1 at the owner.
    for (const auto& p : state.players) {
        LayerState& layer = state.layers.at(p);
        MintBurnVector y = MintBurnVector::zeros(layer.slots());
        y.deltas[layer.slot(p)] = 1.0;
        layer = step_open(layer, TransferMatrix::identity(layer.slots()), y);
    }

    // Newcomer joins, trusting attach_m existing players chosen by degree.
    // Targets are drawn before the newcomer exists, so it cannot pick itself.
    std::vector<std::string> targets = preferential_targets(state.trust, state.attach_m, rng);
    std::string name;
    do {
        name = "u" + std::to_string(state.next_id++);
    } while (state.trust.has_vertex(name));
    state.trust.add_vertex(name);
    for (const auto& t : targets) state.trust.add_edge(name, t);
    state.players.push_back(name);
    state.layers.emplace(name, LayerState(name, {{name, 0.0}}));

    if (policy) policy(state, rng);
    ++state.round;
}

// --- bipartite ownership view -------------------------------------------------------

OwnershipGraph ownership_bipartite(const std::vector<LayerState>& states) {
    OwnershipGraph out;
    std::set<std::string> players;
    std::set<std::string> tokens;
    for (const auto& s : states) {
        if (!tokens.insert(s.layer_id()).second)
            throw Error(errc::validation_error, "duplicate layer id '" + s.layer_id() + "'");
        for (int i = 0; i < s.slots(); ++i) players.insert(s.label(i));
    }
    out.players.assign(players.begin(), players.end());
    out.tokens.assign(tokens.begin(), tokens.end());
    for (const auto& s : states)
        for (int i = 0; i < s.slots(); ++i)
            if (s.balance(i) > 0.0) out.edges.push_back({s.label(i), s.layer_id(), s.balance(i)});
    std::sort(out.edges.begin(), out.edges.end(), [](const OwnershipEdge& a, const OwnershipEdge& b) {
        return a.token != b.token ? a.token < b.token : a.player < b.player;
    });
    return out;
}

std::map<int, double> degree_distribution(const TrustGraph& g) {
    std::map<int, double> out;
    const int n = g.vertex_count();
    if (n == 0) return out;
    std::map<int, long> counts;
    for (const auto& v : g.vertices()) ++counts[g.degree(v)];
    for (const auto& [deg, cnt] : counts)
        out[deg] = static_cast<double>(cnt) / static_cast<double>(n);
    return out;
}

} // namespace tegsim
