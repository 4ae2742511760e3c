#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tegsim/runner.hpp"

namespace {

// "A..B" -> inclusive seed range.
bool parse_seed_range(const std::string& text, std::uint64_t& from, std::uint64_t& to) {
    const std::size_t sep = text.find("..");
    if (sep == std::string::npos) return false;
    const std::string a = text.substr(0, sep);
    const std::string b = text.substr(sep + 2);
    const auto parse = [](const std::string& s, std::uint64_t& v) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc() && ptr == s.data() + s.size();
    };
    return !a.empty() && !b.empty() && parse(a, from) && parse(b, to);
}

// "0,3,7" -> slot indices.
bool parse_active_list(const std::string& text, std::vector<int>& out) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string field = text.substr(pos, comma - pos);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size() || v < 0) return false;
        out.push_back(v);
        pos = comma + 1;
    }
    return !out.empty();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tegsim - token exchange game simulator"};
    app.require_subcommand(1);
    int rc = tegsim::exit_ok;

    // run
    auto* run = app.add_subcommand("run", "execute one scenario config");
    tegsim::RunOptions run_opts;
    std::optional<std::uint64_t> run_seed;
    run->add_option("--config", run_opts.config_path, "scenario JSON file")->required();
    run->add_option("--seed", run_seed, "override the config's seed");
    run->add_option("--out", run_opts.out_dir, "output directory (default tegsim_out)");
    run->callback([&] {
        run_opts.seed = run_seed;
        rc = tegsim::run_command(run_opts);
    });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "inspect CSV artifacts");
    analyze->require_subcommand(1);
    tegsim::AnalyzeOptions an_opts;
    std::string active_list;

    auto* zeta = analyze->add_subcommand("zeta", "hoarding coefficient of a matrix CSV");
    zeta->add_option("--input", an_opts.input, "row,col,weight CSV")->required();
    zeta->add_option("--active", active_list, "comma-separated slot indices (default: all)");
    zeta->callback([&] {
        an_opts.mode = "zeta";
        if (!active_list.empty() && !parse_active_list(active_list, an_opts.active)) {
            std::cerr << "bad --active list '" << active_list << "'\n";
            rc = tegsim::exit_config;
            return;
        }
        rc = tegsim::analyze_command(an_opts, std::cout);
    });

    auto* arb = analyze->add_subcommand("arbitrage", "hunt gainful exchange-rate cycles");
    arb->add_option("--input", an_opts.input, "layer_a,layer_b,rate CSV")->required();
    arb->add_option("--kappa", an_opts.kappa, "layer_a,layer_b,kappa CSV");
    arb->add_option("--mu", an_opts.mu, "layer_a,layer_b,mu CSV");
    arb->add_option("--tol", an_opts.tol, "minimum reportable gain over 1 (default 1e-9)");
    arb->callback([&] {
        an_opts.mode = "arbitrage";
        rc = tegsim::analyze_command(an_opts, std::cout);
    });

    auto* thb = analyze->add_subcommand("theorem-b", "forest-or-free structural check");
    thb->add_option("--input", an_opts.input, "layer_a,layer_b,rate CSV")->required();
    thb->add_option("--mu", an_opts.mu, "layer_a,layer_b,mu CSV")->required();
    thb->add_option("--kappa", an_opts.kappa, "layer_a,layer_b,kappa CSV");
    thb->callback([&] {
        an_opts.mode = "theorem-b";
        rc = tegsim::analyze_command(an_opts, std::cout);
    });

    auto* ent = analyze->add_subcommand("entropy", "per round/layer entropy of snapshots");
    ent->add_option("--input", an_opts.input, "round,layer,player,balance CSV")->required();
    ent->callback([&] {
        an_opts.mode = "entropy";
        rc = tegsim::analyze_command(an_opts, std::cout);
    });

    // batch
    auto* batch = app.add_subcommand("batch", "run one config across a seed range");
    tegsim::BatchOptions batch_opts;
    std::string seeds;
    batch->add_option("--config", batch_opts.config_path, "scenario JSON file")->required();
    batch->add_option("--seeds", seeds, "inclusive range A..B")->required();
    batch->add_option("--out", batch_opts.out_dir, "output directory (default tegsim_batch)");
    batch->add_option("--jobs", batch_opts.jobs, "worker threads (default 4)");
    batch->callback([&] {
        if (!parse_seed_range(seeds, batch_opts.seed_from, batch_opts.seed_to)) {
            std::cerr << "bad --seeds range '" << seeds << "', expected A..B\n";
            rc = tegsim::exit_config;
            return;
        }
        rc = tegsim::batch_command(batch_opts);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the usage error
        return code == 0 ? tegsim::exit_ok : tegsim::exit_config;
    }
    return rc;
}
