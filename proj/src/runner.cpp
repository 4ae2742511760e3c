#include "tegsim/runner.hpp"

#include <atomic>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "tegsim/bargaining.hpp"
#include "tegsim/errors.hpp"
#include "tegsim/metrics.hpp"
#include "tegsim/multilayer.hpp"
#include "tegsim/rng.hpp"
#include "tegsim/scenarios.hpp"

namespace tegsim {

namespace fs = std::filesystem;

namespace {

double ledger_entropy(const Ledger& ledger) {
    if (!(ledger.total() > 0.0)) return 0.0; // an empty book carries no information
    std::vector<double> balances;
    balances.reserve(ledger.size());
    for (const auto& [label, balance] : ledger) balances.push_back(balance);
    return entropy(normalize(balances));
}

// Snapshot + metrics rows for one traced single-layer run. The zeta cell of
// round r describes the matrix that carried r to r+1, so the last row's stays
// empty.
void collect_trace(const RunTrace& trace, ScenarioArtifacts& art) {
    const std::string& layer = trace.final_state.layer_id();
    for (std::size_t i = 0; i < trace.sequence.size(); ++i) {
        const auto& [round, ledger] = trace.sequence.at(i);
        for (const auto& [player, balance] : ledger)
            art.snapshots.push_back({round, layer, player, balance});
        MetricsRow row{round, layer, ledger.total(), ledger_entropy(ledger), {}, {}};
        if (i < trace.matrices.size()) {
            const CirculationReport rep = zeta(trace.matrices[i]);
            row.zeta = rep.zeta;
            row.zeta_star = rep.zeta_star;
        }
        art.metrics.push_back(row);
    }
    art.supply_initial = trace.sequence.at(0).second.total();
    art.supply_final = trace.sequence.back().second.total();
}

ScenarioArtifacts run_pagerank(const ScenarioConfig& cfg) {
    PageRankGame game = build_pagerank_game(cfg.pagerank);
    const TransferMatrix matrix = game.matrix;
    const RoundProvider provider = [&matrix](int, const LayerState&) {
        return RoundPlan{matrix, std::nullopt, {}};
    };
    ScenarioArtifacts art;
    collect_trace(run_traced(game.start, provider, cfg.rounds), art);
    return art;
}

ScenarioArtifacts run_ubi(const ScenarioConfig& cfg) {
    ScenarioArtifacts art;
    collect_trace(run_traced(ubi_initial_state(cfg.ubi), ubi_provider(cfg.ubi), cfg.rounds), art);
    return art;
}

ScenarioArtifacts run_lightning(const ScenarioConfig& cfg) {
    const LayerState main0("main", cfg.lightning.players);
    LightningPlan plan;
    for (const auto& [label, amount] : cfg.lightning.commitments)
        plan.commitments[label] = amount;

    const int n_sub = static_cast<int>(plan.commitments.size());
    for (int r = 0; r < cfg.rounds; ++r) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        plan.sub_rounds.push_back(random_transfer_matrix(n_sub, rng));
    }

    const LightningResult res = run_lightning_scenario(main0, plan);

    ScenarioArtifacts art;
    const auto snapshot_layer = [&art](const LayerState& s, int round) {
        for (int i = 0; i < s.slots(); ++i)
            art.snapshots.push_back({round, s.layer_id(), s.label(i), s.balance(i)});
        art.metrics.push_back({round, s.layer_id(), s.supply(),
                               ledger_entropy(s.to_ledger()), {}, {}});
    };
    // Parent: initial, channel open, settled. No transfer matrix drives these
    // moves, so their zeta cells stay empty.
    snapshot_layer(main0, 0);
    snapshot_layer(res.parent_committed, 1);
    snapshot_layer(res.main_final, 2);

    const std::string sub_layer = res.sub_final.layer_id();
    for (std::size_t i = 0; i < res.sub_sequence.size(); ++i) {
        const auto& [round, ledger] = res.sub_sequence.at(i);
        for (const auto& [player, balance] : ledger)
            art.snapshots.push_back({round, sub_layer, player, balance});
        MetricsRow row{round, sub_layer, ledger.total(), ledger_entropy(ledger), {}, {}};
        if (i < plan.sub_rounds.size()) {
            const CirculationReport rep = zeta(plan.sub_rounds[i]);
            row.zeta = rep.zeta;
            row.zeta_star = rep.zeta_star;
        }
        art.metrics.push_back(row);
    }
    art.supply_initial = main0.supply();
    art.supply_final = res.main_final.supply();
    return art;
}

ScenarioArtifacts run_circles(const ScenarioConfig& cfg) {
    CirclesState state = circles_seed(cfg.circles.trust_edges, cfg.circles.attach_m);
    ScenarioArtifacts art;

    const auto snapshot_all = [&art, &cfg](const CirclesState& st, int round) {
        double total = 0.0;
        for (const auto& player : st.players) {
            const LayerState& layer = st.layers.at(player);
            for (int i = 0; i < layer.slots(); ++i)
                art.snapshots.push_back({round, layer.layer_id(), layer.label(i), layer.balance(i)});
            MetricsRow row{round, layer.layer_id(), layer.supply(),
                           ledger_entropy(layer.to_ledger()), {}, {}};
            if (round < cfg.rounds) {
                // Every layer present now will be driven by the identity
                // matrix (mint-only step) in the next round.
                row.zeta = 1.0;
                row.zeta_star = 0.0;
            }
            art.metrics.push_back(row);
            total += layer.supply();
        }
        return total;
    };

    art.supply_initial = snapshot_all(state, 0);
    double last = art.supply_initial;
    for (int r = 1; r <= cfg.rounds; ++r) {
        circles_round(state, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        last = snapshot_all(state, r);
    }
    art.supply_final = last;
    return art;
}

ScenarioArtifacts run_custom(const ScenarioConfig& cfg) {
    const LayerState initial("main", cfg.custom.players);
    const TransactionLog log = transactions_from_csv(read_text_file(cfg.custom.transactions_file));
    const RoundProvider provider = [&log](int round, const LayerState& current) {
        return RoundPlan{build_matrix_from_transactions(log.for_round(round), current),
                         std::nullopt, {}};
    };
    ScenarioArtifacts art;
    collect_trace(run_traced(initial, provider, cfg.rounds), art);
    return art;
}

std::string describe(const RatePair& rate) {
    if (rate.num == 0 && rate.den == 0) return "ratio=irrational";
    return "ratio=" + std::to_string(rate.num) + "/" + std::to_string(rate.den);
}

void collect_bargaining(const ScenarioConfig& cfg, ScenarioArtifacts& art) {
    if (!cfg.bargaining.any()) return;
    for (int r = 1; r <= cfg.rounds; ++r) {
        if (cfg.bargaining.auction) {
            const AuctionSpec& spec = *cfg.bargaining.auction;
            if (const auto outcome = run_auction(spec))
                art.bargaining.push_back(
                    {r, "auction", spec.item_layer, outcome->layer, outcome->rate,
                     "winner=" + outcome->bidder + ";amount=" + format_number(outcome->amount) +
                         ";quantity=" + format_number(spec.quantity)});
        }
        if (cfg.bargaining.dice) {
            // A fresh derived seed per round: the dice are the one mechanism
            // that is supposed to vary between rounds.
            const RandomRatioOutcome out =
                run_random_ratio(*cfg.bargaining.dice,
                                 derive_seed(cfg.seed, 5000 + static_cast<std::uint64_t>(r)));
            art.bargaining.push_back({r, "dice", "a", "b", out.rate.forward,
                                      "mean_a=" + format_number(out.mean_a) +
                                          ";mean_b=" + format_number(out.mean_b) + ";" +
                                          describe(out.rate)});
        }
        if (cfg.bargaining.blind_vote) {
            const BlindVoteOutcome out = run_blind_vote(*cfg.bargaining.blind_vote);
            art.bargaining.push_back({r, "blind_vote", "a", "b", out.rate.forward,
                                      "pick_for_b=" + format_number(out.pick_for_b) +
                                          ";pick_for_a=" + format_number(out.pick_for_a)});
        }
    }
}

// Which failures mean "your inputs" rather than "our engine".
bool is_input_error(errc code) {
    switch (code) {
        case errc::parse_error:
        case errc::validation_error:
        case errc::io_error:
        case errc::treasury_depleted:
        case errc::unknown_player:
        case errc::unknown_layer:
        case errc::dangling_page:
        case errc::empty_graph:
        case errc::empty_token_set:
        case errc::empty_voter_set:
        case errc::missing_mu:
        case errc::cost_edge_mismatch:
        case errc::insufficient_balance:
        case errc::overspend:
            return true;
        default:
            return false;
    }
}

} // namespace

ScenarioArtifacts execute_scenario(const ScenarioConfig& cfg) {
    ScenarioArtifacts art;
    switch (cfg.kind) {
        case ScenarioKind::pagerank: art = run_pagerank(cfg); break;
        case ScenarioKind::ubi: art = run_ubi(cfg); break;
        case ScenarioKind::lightning: art = run_lightning(cfg); break;
        case ScenarioKind::circles: art = run_circles(cfg); break;
        case ScenarioKind::custom: art = run_custom(cfg); break;
    }
    collect_bargaining(cfg, art);
    return art;
}

int run_command(const RunOptions& opts) {
    ScenarioConfig cfg;
    try {
        cfg = load_config(opts.config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    if (opts.seed) cfg.seed = *opts.seed;

    ScenarioArtifacts art;
    try {
        log_line("running kind=" + to_string(cfg.kind) + " rounds=" + std::to_string(cfg.rounds) +
                 " seed=" + std::to_string(cfg.seed));
        art = execute_scenario(cfg);
    } catch (const Error& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return is_input_error(e.code()) ? exit_config : exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return exit_internal;
    }

    try {
        fs::create_directories(opts.out_dir);
        const std::map<std::string, std::string> files = {
            {"snapshots.csv", snapshots_to_csv(art.snapshots)},
            {"metrics.csv", metrics_to_csv(art.metrics)},
            {"pairwise.csv", pairwise_to_csv(art.pairwise)},
            {"bargaining.csv", bargaining_to_csv(art.bargaining)},
        };
        nlohmann::ordered_json manifest;
        manifest["kind"] = to_string(cfg.kind);
        manifest["seed"] = cfg.seed;
        manifest["rounds"] = cfg.rounds;
        manifest["supply_initial"] = format_number(art.supply_initial);
        manifest["supply_final"] = format_number(art.supply_final);
        nlohmann::ordered_json sums = nlohmann::ordered_json::object();
        for (const auto& [name, content] : files) {
            write_text_file((fs::path(opts.out_dir) / name).string(), content);
            sums[name] = "fnv1a64:" + to_hex(fnv1a64(content));
            log_line("wrote " + name + " (" + std::to_string(content.size()) + " bytes)");
        }
        manifest["files"] = sums;
        write_text_file((fs::path(opts.out_dir) / "manifest.json").string(),
                        manifest.dump(2) + "\n");
    } catch (const Error& e) {
        std::cerr << "output failed: " << e.what() << '\n';
        return exit_internal;
    }

    std::cout << "run complete: kind=" << to_string(cfg.kind) << " rounds=" << cfg.rounds
              << " seed=" << cfg.seed << " supply=" << format_number(art.supply_final) << '\n';
    return exit_ok;
}

// --- analyze -------------------------------------------------------------------

namespace {

CostMatrix cost_matrix_from_rows(const std::vector<PairValueRow>& rows,
                                 const FungibilityMatrix& rho) {
    CostMatrix m(rho.size(), std::vector<double>(rho.size(), 0.0));
    for (const auto& row : rows) m[rho.index_of(row.a)][rho.index_of(row.b)] = row.value;
    return m;
}

std::string cycle_to_string(const std::vector<int>& cycle, const std::vector<std::string>& layers) {
    std::string out;
    for (const int v : cycle) {
        out += layers[v];
        out += " -> ";
    }
    out += layers[cycle.front()];
    return out;
}

int analyze_zeta(const AnalyzeOptions& opts, std::ostream& out) {
    const TransferMatrix matrix = matrix_from_csv(read_text_file(opts.input));
    const CirculationReport rep = zeta(matrix, opts.active);
    out << "zeta=" << format_number(rep.zeta) << " zeta_star=" << format_number(rep.zeta_star)
        << " active=" << rep.active_count << '\n';
    return exit_ok;
}

int analyze_arbitrage(const AnalyzeOptions& opts, std::ostream& out) {
    const FungibilityMatrix rho = fungibility_from_csv(read_text_file(opts.input));
    std::optional<CostMatrix> kappa, mu;
    if (!opts.kappa.empty())
        kappa = cost_matrix_from_rows(pair_values_from_csv(read_text_file(opts.kappa), "kappa"), rho);
    if (!opts.mu.empty())
        mu = cost_matrix_from_rows(pair_values_from_csv(read_text_file(opts.mu), "mu"), rho);
    const FungibilityGraph graph = fungibility_graph(rho, kappa, mu);
    if (const auto cycle = find_arbitrage(graph, opts.tol)) {
        out << "arbitrage: " << cycle_to_string(cycle->cycle, graph.layers)
            << " gain=" << format_number(cycle->gain) << '\n';
        return exit_adverse;
    }
    out << "no arbitrage within tolerance " << format_number(opts.tol) << '\n';
    return exit_ok;
}

int analyze_theorem_b(const AnalyzeOptions& opts, std::ostream& out) {
    if (opts.mu.empty())
        throw Error(errc::validation_error, "theorem-b needs --mu (per-edge swap costs)");
    const FungibilityMatrix rho = fungibility_from_csv(read_text_file(opts.input));
    std::optional<CostMatrix> kappa;
    if (!opts.kappa.empty())
        kappa = cost_matrix_from_rows(pair_values_from_csv(read_text_file(opts.kappa), "kappa"), rho);
    const CostMatrix mu = cost_matrix_from_rows(pair_values_from_csv(read_text_file(opts.mu), "mu"), rho);
    const FungibilityGraph graph = fungibility_graph(rho, kappa, mu);
    const TheoremBReport rep = check_theorem_b(graph);
    switch (rep.status) {
        case TheoremBStatus::acyclic:
            out << "acyclic: the exchange graph is a forest\n";
            return exit_ok;
        case TheoremBStatus::zero_mu:
            out << "zero_mu: cycles exist but every swap cost is zero\n";
            return exit_ok;
        case TheoremBStatus::counterexample:
            out << "counterexample: " << cycle_to_string(rep.cycle, graph.layers) << '\n';
            return exit_adverse;
    }
    return exit_internal;
}

int analyze_entropy(const AnalyzeOptions& opts, std::ostream& out) {
    const auto rows = snapshots_from_csv(read_text_file(opts.input));
    // Group balances by (round, layer) in first-seen order.
    std::vector<std::pair<std::pair<int, std::string>, std::vector<double>>> groups;
    std::map<std::pair<int, std::string>, std::size_t> index;
    for (const auto& row : rows) {
        const std::pair<int, std::string> key{row.round, row.layer};
        auto [it, fresh] = index.try_emplace(key, groups.size());
        if (fresh) groups.push_back({key, {}});
        groups[it->second].second.push_back(row.balance);
    }
    out << "round,layer,entropy_bits\n";
    for (const auto& [key, balances] : groups) {
        double total = 0.0;
        for (const double b : balances) total += b;
        const double bits = total > 0.0 ? entropy(normalize(balances)) : 0.0;
        out << key.first << ',' << key.second << ',' << format_number(bits) << '\n';
    }
    return exit_ok;
}

} // namespace

int analyze_command(const AnalyzeOptions& opts, std::ostream& out) {
    try {
        if (opts.mode == "zeta") return analyze_zeta(opts, out);
        if (opts.mode == "arbitrage") return analyze_arbitrage(opts, out);
        if (opts.mode == "theorem-b") return analyze_theorem_b(opts, out);
        if (opts.mode == "entropy") return analyze_entropy(opts, out);
        std::cerr << "unknown analyze mode '" << opts.mode << "'\n";
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "analyze failed: " << e.what() << '\n';
        return exit_config; // analyze runs no simulation: every failure is an input problem
    } catch (const std::exception& e) {
        std::cerr << "analyze failed: " << e.what() << '\n';
        return exit_internal;
    }
}

// --- batch ---------------------------------------------------------------------

int batch_command(const BatchOptions& opts) {
    try {
        load_config(opts.config_path); // validate once before spinning up workers
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    if (opts.seed_to < opts.seed_from) {
        std::cerr << "bad seed range: " << opts.seed_from << ".." << opts.seed_to << '\n';
        return exit_config;
    }
    if (opts.seed_to - opts.seed_from >= 1000000) {
        std::cerr << "seed range too large (max 1000000 runs per batch)\n";
        return exit_config;
    }

    const int jobs = std::max(1, std::min(opts.jobs, 64));
    std::atomic<std::uint64_t> next{opts.seed_from};
    std::mutex mtx;
    int worst = exit_ok;
    std::vector<std::uint64_t> failed;

    const auto worker = [&] {
        while (true) {
            const std::uint64_t seed = next.fetch_add(1);
            if (seed > opts.seed_to || seed < opts.seed_from) break; // second test guards wrap
            RunOptions run;
            run.config_path = opts.config_path;
            run.seed = seed;
            run.out_dir =
                (fs::path(opts.out_dir) / ("seed_" + std::to_string(seed))).string();
            const int code = run_command(run);
            if (code != exit_ok) {
                std::lock_guard lock(mtx);
                worst = std::max(worst, code);
                failed.push_back(seed);
            }
        }
    };

    std::vector<std::thread> pool;
    const std::uint64_t span = opts.seed_to - opts.seed_from + 1;
    const int n_threads = static_cast<int>(std::min<std::uint64_t>(jobs, span));
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(failed.begin(), failed.end());
    nlohmann::ordered_json manifest;
    manifest["seed_from"] = opts.seed_from;
    manifest["seed_to"] = opts.seed_to;
    manifest["failed"] = failed;
    try {
        fs::create_directories(opts.out_dir);
        write_text_file((fs::path(opts.out_dir) / "batch_manifest.json").string(),
                        manifest.dump(2) + "\n");
    } catch (const Error& e) {
        std::cerr << "output failed: " << e.what() << '\n';
        return exit_internal;
    }
    std::cout << "batch complete: " << span - failed.size() << "/" << span << " runs ok\n";
    return worst;
}

} // namespace tegsim
