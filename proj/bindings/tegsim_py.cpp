// Python bindings for the simulator core. The module mirrors the C++ API
// one-to-one: same names, same defaults, same error codes (raised as
// tegsim.TegsimError with the code name prefixed to the message), and the
// same deterministic generator, so a seed reproduces identical numbers from
// either language.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "tegsim/bargaining.hpp"
#include "tegsim/engine.hpp"
#include "tegsim/io.hpp"
#include "tegsim/metrics.hpp"
#include "tegsim/multilayer.hpp"
#include "tegsim/rng.hpp"
#include "tegsim/runner.hpp"
#include "tegsim/scenarios.hpp"

namespace py = pybind11;
using namespace tegsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic token-ledger network simulator";

    py::register_exception<Error>(m, "TegsimError");

    // --- deterministic generator ------------------------------------------------
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("uniform01", &Rng::uniform01)
        .def("uniform_int", &Rng::uniform_int, py::arg("lo"), py::arg("hi"),
             "Uniform integer, both ends inclusive.")
        .def("uniform_real", &Rng::uniform_real, py::arg("lo"), py::arg("hi"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"),
          "Stable per-stream sub-seed of a master seed.");

    // --- ledgers ------------------------------------------------------------------
    py::class_<Ledger>(m, "Ledger")
        .def(py::init<>())
        .def("set", &Ledger::set, py::arg("label"), py::arg("balance"))
        .def("contains", &Ledger::contains, py::arg("label"))
        .def("balance", &Ledger::balance, py::arg("label"))
        .def("total", &Ledger::total)
        .def("entries", &Ledger::entries)
        .def("__len__", &Ledger::size);

    py::class_<LedgerSequence>(m, "LedgerSequence")
        .def("__len__", &LedgerSequence::size)
        .def("__getitem__",
             [](const LedgerSequence& seq, std::size_t i) {
                 if (i >= seq.size()) throw py::index_error();
                 return seq.at(i);
             })
        .def("back", &LedgerSequence::back);

    // --- transfer matrices ----------------------------------------------------
    py::class_<TransferMatrix::Verdict>(m, "MatrixVerdict")
        .def_readonly("ok", &TransferMatrix::Verdict::ok)
        .def_readonly("column", &TransferMatrix::Verdict::column)
        .def_readonly("detail", &TransferMatrix::Verdict::detail)
        .def("__bool__", [](const TransferMatrix::Verdict& v) { return v.ok; });

    py::class_<TransferMatrix>(m, "TransferMatrix")
        .def(py::init<int>(), py::arg("n"))
        .def_static("identity", &TransferMatrix::identity, py::arg("n"))
        .def("size", &TransferMatrix::size)
        .def("set", &TransferMatrix::set, py::arg("row"), py::arg("col"), py::arg("weight"))
        .def("entry", &TransferMatrix::entry, py::arg("row"), py::arg("col"))
        .def("diagonal", &TransferMatrix::diagonal, py::arg("slot"))
        .def("entry_count", &TransferMatrix::entry_count)
        .def("apply", &TransferMatrix::apply, py::arg("x"))
        .def("triplets", &TransferMatrix::triplets)
        .def("validate", &TransferMatrix::validate, py::arg("tol") = 1e-9)
        .def("renormalized", &TransferMatrix::renormalized, py::arg("max_drift") = 1e-6);

    m.def("random_transfer_matrix", &random_transfer_matrix, py::arg("n"), py::arg("rng"),
          py::arg("max_offdiag") = 4,
          "A valid random matrix drawn entirely from the supplied generator.");

    // --- layer states and the two step kinds --------------------------------------
    py::class_<LayerState>(m, "LayerState")
        .def(py::init<std::string, const std::vector<std::pair<std::string, double>>&>(),
             py::arg("layer_id"), py::arg("players"))
        .def("layer_id", &LayerState::layer_id)
        .def("round", &LayerState::round)
        .def("slots", &LayerState::slots)
        .def("label", &LayerState::label, py::arg("slot"))
        .def("slot", &LayerState::slot, py::arg("label"))
        .def("has", &LayerState::has, py::arg("label"))
        .def("balance", py::overload_cast<int>(&LayerState::balance, py::const_),
             py::arg("slot"))
        .def("balance", py::overload_cast<const std::string&>(&LayerState::balance, py::const_),
             py::arg("label"))
        .def("balances", &LayerState::balances)
        .def("supply", &LayerState::supply)
        .def("add_player", &LayerState::add_player, py::arg("label"), py::arg("balance") = 0.0)
        .def("to_ledger", &LayerState::to_ledger);

    m.def("step_closed", &step_closed, py::arg("state"), py::arg("matrix"),
          "One conserving round: x' = W x.");
    m.def(
        "step_open",
        [](const LayerState& state, const TransferMatrix& matrix,
           const std::vector<double>& deltas) {
            return step_open(state, matrix, MintBurnVector{deltas});
        },
        py::arg("state"), py::arg("matrix"), py::arg("deltas"),
        "One round with per-slot mint/burn applied after the transfer. Each "
        "delta must stay above -balance * self_weight for its slot.");

    // --- distribution metrics ---------------------------------------------------
    py::class_<TokenDistribution>(m, "TokenDistribution")
        .def(py::init<>())
        .def_readwrite("p", &TokenDistribution::p)
        .def("__len__", [](const TokenDistribution& d) { return d.p.size(); });

    m.def("normalize", py::overload_cast<const std::vector<double>&>(&normalize),
          py::arg("balances"));
    m.def("normalize", py::overload_cast<const LayerState&>(&normalize), py::arg("state"));
    m.def("entropy", &entropy, py::arg("dist"), "Shannon entropy in bits.");
    m.def("relative_entropy", &relative_entropy, py::arg("p"), py::arg("q"),
          "D(p || q) in bits; +inf when p has mass where q has none.");

    py::class_<CirculationReport>(m, "CirculationReport")
        .def_readonly("zeta", &CirculationReport::zeta)
        .def_readonly("zeta_star", &CirculationReport::zeta_star)
        .def_readonly("active_count", &CirculationReport::active_count);
    m.def("zeta", &zeta, py::arg("matrix"), py::arg("active") = std::vector<int>{},
          "Hoarding coefficient: mean self-loop weight over the active slots.");
    m.def("zeta_global", &zeta_global, py::arg("zetas"));
    m.def("inflation_ratio", &inflation_ratio, py::arg("zeta1"), py::arg("chi1"),
          py::arg("zeta2"), py::arg("chi2"));

    py::class_<ExchangeIdentity>(m, "ExchangeIdentity")
        .def_readonly("m", &ExchangeIdentity::m)
        .def_readonly("v", &ExchangeIdentity::v)
        .def_readonly("p", &ExchangeIdentity::p)
        .def_readonly("q", &ExchangeIdentity::q);
    m.def("exchange_identity", &exchange_identity, py::arg("zeta1"), py::arg("chi1"),
          py::arg("zeta2"), py::arg("chi2"),
          "Two-layer flow balance: m * v == p * q by construction.");

    // --- cross-layer exchange ------------------------------------------------------
    py::class_<FungibilityMatrix::Verdict>(m, "FungibilityVerdict")
        .def_readonly("ok", &FungibilityMatrix::Verdict::ok)
        .def_readonly("detail", &FungibilityMatrix::Verdict::detail)
        .def("__bool__", [](const FungibilityMatrix::Verdict& v) { return v.ok; });

    py::class_<FungibilityMatrix>(m, "FungibilityMatrix")
        .def(py::init<std::vector<std::string>>(), py::arg("layers"))
        .def("size", &FungibilityMatrix::size)
        .def("layers", &FungibilityMatrix::layers)
        .def("index_of", &FungibilityMatrix::index_of, py::arg("layer"))
        .def("set", py::overload_cast<int, int, double>(&FungibilityMatrix::set),
             py::arg("from_layer"), py::arg("to_layer"), py::arg("rate"))
        .def("set",
             py::overload_cast<const std::string&, const std::string&, double>(
                 &FungibilityMatrix::set),
             py::arg("from_layer"), py::arg("to_layer"), py::arg("rate"))
        .def("clear", &FungibilityMatrix::clear, py::arg("from_layer"), py::arg("to_layer"))
        .def("rate", py::overload_cast<int, int>(&FungibilityMatrix::rate, py::const_),
             py::arg("from_layer"), py::arg("to_layer"))
        .def("rate",
             py::overload_cast<const std::string&, const std::string&>(
                 &FungibilityMatrix::rate, py::const_),
             py::arg("from_layer"), py::arg("to_layer"))
        .def("validate", &FungibilityMatrix::validate);

    py::class_<ArbitrageCycle>(m, "ArbitrageCycle")
        .def_readonly("cycle", &ArbitrageCycle::cycle)
        .def_readonly("gain", &ArbitrageCycle::gain);

    py::enum_<TheoremBStatus>(m, "StructureStatus")
        .value("acyclic", TheoremBStatus::acyclic)
        .value("zero_mu", TheoremBStatus::zero_mu)
        .value("counterexample", TheoremBStatus::counterexample);

    py::class_<TheoremBReport>(m, "StructureReport")
        .def_readonly("status", &TheoremBReport::status)
        .def_readonly("cycle", &TheoremBReport::cycle);

    m.def(
        "find_arbitrage",
        [](const FungibilityMatrix& rho, double tol, const std::optional<CostMatrix>& kappa,
           const std::optional<CostMatrix>& mu) {
            return find_arbitrage(fungibility_graph(rho, kappa, mu), tol);
        },
        py::arg("rho"), py::arg("tol") = 1e-9, py::arg("kappa") = std::nullopt,
        py::arg("mu") = std::nullopt,
        "First trading loop whose rate product beats 1 + tol, or None.");
    m.def(
        "check_structure",
        [](const FungibilityMatrix& rho, const CostMatrix& mu,
           const std::optional<CostMatrix>& kappa) {
            return check_theorem_b(fungibility_graph(rho, kappa, mu));
        },
        py::arg("rho"), py::arg("mu"), py::arg("kappa") = std::nullopt,
        "Structural dichotomy for arbitrage-minimising books: the exchange "
        "graph is a forest, or every swap cost is zero — anything else comes "
        "back as a counterexample with a witness cycle.");

    // --- worked scenarios -----------------------------------------------------------
    py::class_<UbiSpec>(m, "UbiSpec")
        .def(py::init([](double omega, double delta, double epsilon) {
                 return UbiSpec{omega, delta, epsilon};
             }),
             py::arg("omega"), py::arg("delta"), py::arg("epsilon"))
        .def_readwrite("omega", &UbiSpec::omega)
        .def_readwrite("delta", &UbiSpec::delta)
        .def_readwrite("epsilon", &UbiSpec::epsilon);
    m.def("ubi_matrix", &ubi_matrix, py::arg("treasury_balance"), py::arg("spec"));
    m.def("ubi_initial_state", &ubi_initial_state, py::arg("spec"));
    m.def("ubi_closed_form", &ubi_closed_form, py::arg("j"), py::arg("spec"),
          "(treasury, citizen) balances after j rounds, in closed form.");

    py::class_<PageRankSpec>(m, "PageRankSpec")
        .def(py::init<>())
        .def_readwrite("pages", &PageRankSpec::pages)
        .def_readwrite("links", &PageRankSpec::links)
        .def_readwrite("damping", &PageRankSpec::damping)
        .def_readwrite("dangling_uniform", &PageRankSpec::dangling_uniform);
    py::class_<PageRankResult>(m, "PageRankResult")
        .def_readonly("state", &PageRankResult::state)
        .def_readonly("iterations", &PageRankResult::iterations)
        .def_readonly("converged", &PageRankResult::converged);
    m.def("pagerank_stationary", &pagerank_stationary, py::arg("spec"), py::arg("tol") = 1e-12,
          py::arg("max_iter") = 200);

    py::class_<LightningPlan>(m, "LightningPlan")
        .def(py::init<>())
        .def_readwrite("commitments", &LightningPlan::commitments)
        .def_readwrite("sub_rounds", &LightningPlan::sub_rounds)
        .def_readwrite("channel_label", &LightningPlan::channel_label);
    py::class_<LightningResult>(m, "LightningResult")
        .def_readonly("main_final", &LightningResult::main_final)
        .def_readonly("parent_committed", &LightningResult::parent_committed)
        .def_readonly("sub_sequence", &LightningResult::sub_sequence)
        .def_readonly("sub_final", &LightningResult::sub_final);
    m.def("run_lightning_scenario", &run_lightning_scenario, py::arg("main"), py::arg("plan"),
          "Commit into a channel, run it, settle back; parent supply is "
          "identical before and after.");

    // --- trust networks ------------------------------------------------------------
    py::class_<TrustGraph>(m, "TrustGraph")
        .def(py::init<>())
        .def("add_vertex", &TrustGraph::add_vertex, py::arg("v"))
        .def("add_edge", &TrustGraph::add_edge, py::arg("a"), py::arg("b"))
        .def("has_vertex", &TrustGraph::has_vertex, py::arg("v"))
        .def("has_edge", &TrustGraph::has_edge, py::arg("a"), py::arg("b"))
        .def("degree", &TrustGraph::degree, py::arg("v"))
        .def("degree_sum", &TrustGraph::degree_sum)
        .def("edge_count", &TrustGraph::edge_count)
        .def("vertex_count", &TrustGraph::vertex_count)
        .def("vertices", &TrustGraph::vertices)
        .def("neighbours",
             [](const TrustGraph& g, const std::string& v) { return g.neighbours(v); },
             py::arg("v"))
        .def("connected", &TrustGraph::connected);

    m.def("attachment_probability", &attachment_probability, py::arg("g"), py::arg("v"));
    m.def("sample_attachment", &sample_attachment, py::arg("g"), py::arg("rng"));
    m.def("preferential_targets", &preferential_targets, py::arg("g"), py::arg("m"),
          py::arg("rng"));

    py::class_<CirclesState>(m, "CirclesState")
        .def_readonly("round", &CirclesState::round)
        .def_readonly("attach_m", &CirclesState::attach_m)
        .def_readonly("trust", &CirclesState::trust)
        .def_readonly("players", &CirclesState::players)
        .def_readonly("layers", &CirclesState::layers);
    m.def("circles_seed", &circles_seed, py::arg("trust_edges"), py::arg("attach_m") = 2);
    m.def(
        "circles_round",
        [](CirclesState& state, std::uint64_t seed) { circles_round(state, seed); },
        py::arg("state"), py::arg("seed"),
        "Mint one token per owner, admit one newcomer by preferential "
        "attachment, advance the round.");

    // --- text helpers ----------------------------------------------------------------
    m.def("format_number", &format_number, py::arg("v"),
          "The canonical numeric rendering used by every CSV the tool writes.");
    m.def("fnv1a64", [](const std::string& data) { return fnv1a64(data); }, py::arg("data"),
          "The checksum used in run manifests.");

    // --- whole runs from Python -------------------------------------------------------
    m.attr("EXIT_OK") = exit_ok;
    m.attr("EXIT_INTERNAL") = exit_internal;
    m.attr("EXIT_CONFIG") = exit_config;
    m.attr("EXIT_ADVERSE") = exit_adverse;

    m.def(
        "run",
        [](const std::string& config_path, const std::string& out_dir,
           const std::optional<std::uint64_t>& seed) {
            RunOptions opts;
            opts.config_path = config_path;
            opts.out_dir = out_dir;
            opts.seed = seed;
            return run_command(opts);
        },
        py::arg("config_path"), py::arg("out_dir") = "tegsim_out",
        py::arg("seed") = std::nullopt,
        "Full scenario run: writes snapshots.csv, metrics.csv, pairwise.csv, "
        "bargaining.csv and manifest.json into out_dir; returns the exit code.");
    m.def(
        "analyze",
        [](const std::string& mode, const std::string& input, const std::string& kappa,
           const std::string& mu, double tol, const std::vector<int>& active) {
            AnalyzeOptions opts;
            opts.mode = mode;
            opts.input = input;
            opts.kappa = kappa;
            opts.mu = mu;
            opts.tol = tol;
            opts.active = active;
            std::ostringstream out;
            const int code = analyze_command(opts, out);
            return py::make_tuple(code, out.str());
        },
        py::arg("mode"), py::arg("input"), py::arg("kappa") = "", py::arg("mu") = "",
        py::arg("tol") = 1e-9, py::arg("active") = std::vector<int>{},
        "Offline analysis (zeta | arbitrage | theorem-b | entropy) over CSV "
        "inputs; returns (exit_code, report_text).");
    m.def(
        "batch",
        [](const std::string& config_path, std::uint64_t seed_from, std::uint64_t seed_to,
           const std::string& out_dir, int jobs) {
            BatchOptions opts;
            opts.config_path = config_path;
            opts.seed_from = seed_from;
            opts.seed_to = seed_to;
            opts.out_dir = out_dir;
            opts.jobs = jobs;
            return batch_command(opts);
        },
        py::arg("config_path"), py::arg("seed_from"), py::arg("seed_to"),
        py::arg("out_dir") = "tegsim_batch", py::arg("jobs") = 4,
        "One run per seed in [seed_from, seed_to]; returns the worst exit code.");
}
