#include "tegsim/config.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "tegsim/errors.hpp"
#include "tegsim/io.hpp"

namespace tegsim {

// ordered_json keeps object keys in file order, so player maps parse into
// deterministic slot orders chosen by whoever wrote the config.
using json = nlohmann::ordered_json;

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::pagerank: return "pagerank";
        case ScenarioKind::ubi: return "ubi";
        case ScenarioKind::lightning: return "lightning";
        case ScenarioKind::circles: return "circles";
        case ScenarioKind::custom: return "custom";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(errc::validation_error, what); }

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) fail("unknown key '" + key + "' in " + ctx);
    }
}

const json& require(const json& obj, const std::string& ctx, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing key '" + std::string(key) + "' in " + ctx);
    return *it;
}

const json* optional_key(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& ctx) {
    if (!v.is_number()) fail(ctx + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& ctx) {
    if (!v.is_number_integer()) fail(ctx + " must be an integer");
    return v.get<int>();
}

std::uint64_t as_seed(const json& v, const std::string& ctx) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0))
        fail(ctx + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& ctx) {
    if (!v.is_string()) fail(ctx + " must be a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& ctx) {
    if (!v.is_boolean()) fail(ctx + " must be a boolean");
    return v.get<bool>();
}

std::vector<std::pair<std::string, double>> as_balance_map(const json& v, const std::string& ctx) {
    if (!v.is_object()) fail(ctx + " must be an object of label -> number");
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [key, value] : v.items())
        out.emplace_back(key, as_number(value, ctx + "." + key));
    if (out.empty()) fail(ctx + " must not be empty");
    return out;
}

PageRankSpec parse_pagerank(const json& block) {
    check_keys(block, "scenario.pagerank", {"pages", "links", "damping", "dangling_uniform"});
    PageRankSpec spec;
    spec.pages = as_int(require(block, "scenario.pagerank", "pages"), "pages");
    const json& links = require(block, "scenario.pagerank", "links");
    if (!links.is_array()) fail("links must be an array of [from, to] or [from, to, count]");
    for (const auto& link : links) {
        if (!link.is_array() || link.size() < 2 || link.size() > 3)
            fail("each link must be [from, to] or [from, to, count]");
        const int from = as_int(link[0], "link from");
        const int to = as_int(link[1], "link to");
        long count = 1;
        if (link.size() == 3) count = as_int(link[2], "link count");
        spec.links[{from, to}] += count;
    }
    if (const json* v = optional_key(block, "damping")) spec.damping = as_number(*v, "damping");
    if (const json* v = optional_key(block, "dangling_uniform"))
        spec.dangling_uniform = as_bool(*v, "dangling_uniform");
    return spec;
}

UbiSpec parse_ubi(const json& block) {
    check_keys(block, "scenario.ubi", {"omega", "delta", "epsilon"});
    UbiSpec spec;
    spec.omega = as_number(require(block, "scenario.ubi", "omega"), "omega");
    spec.delta = as_number(require(block, "scenario.ubi", "delta"), "delta");
    spec.epsilon = as_number(require(block, "scenario.ubi", "epsilon"), "epsilon");
    return spec;
}

LightningConfig parse_lightning(const json& block) {
    check_keys(block, "scenario.lightning", {"players", "commitments"});
    LightningConfig cfg;
    cfg.players = as_balance_map(require(block, "scenario.lightning", "players"),
                                 "scenario.lightning.players");
    cfg.commitments = as_balance_map(require(block, "scenario.lightning", "commitments"),
                                     "scenario.lightning.commitments");
    return cfg;
}

CirclesConfig parse_circles(const json& block) {
    check_keys(block, "scenario.circles", {"trust_edges", "attach_m"});
    CirclesConfig cfg;
    const json& edges = require(block, "scenario.circles", "trust_edges");
    if (!edges.is_array()) fail("trust_edges must be an array of [a, b] pairs");
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2) fail("each trust edge must be an [a, b] pair");
        cfg.trust_edges.emplace_back(as_string(e[0], "trust edge endpoint"),
                                     as_string(e[1], "trust edge endpoint"));
    }
    if (cfg.trust_edges.empty()) fail("trust_edges must not be empty");
    if (const json* v = optional_key(block, "attach_m")) cfg.attach_m = as_int(*v, "attach_m");
    return cfg;
}

CustomConfig parse_custom(const json& block, const std::string& config_dir) {
    check_keys(block, "scenario.custom", {"players", "transactions"});
    CustomConfig cfg;
    cfg.players =
        as_balance_map(require(block, "scenario.custom", "players"), "scenario.custom.players");
    const std::string file =
        as_string(require(block, "scenario.custom", "transactions"), "transactions");
    std::filesystem::path p(file);
    cfg.transactions_file =
        p.is_absolute() ? p.string() : (std::filesystem::path(config_dir) / p).string();
    return cfg;
}

AuctionSpec parse_auction(const json& block) {
    check_keys(block, "bargaining.auction", {"item_layer", "quantity", "minimum_bids", "bids"});
    AuctionSpec spec;
    spec.item_layer = as_string(require(block, "bargaining.auction", "item_layer"), "item_layer");
    spec.quantity = as_number(require(block, "bargaining.auction", "quantity"), "quantity");
    const json& floors = require(block, "bargaining.auction", "minimum_bids");
    if (!floors.is_object()) fail("minimum_bids must be an object of layer -> floor");
    for (const auto& [key, value] : floors.items())
        spec.minimum_bids[key] = as_number(value, "minimum_bids." + key);
    const json& bids = require(block, "bargaining.auction", "bids");
    if (!bids.is_array()) fail("bids must be an array");
    for (const auto& b : bids) {
        if (!b.is_object()) fail("each bid must be an object");
        check_keys(b, "bargaining.auction.bids[]", {"layer", "bidder", "amount"});
        spec.bids.push_back({as_string(require(b, "bid", "layer"), "bid layer"),
                             as_string(require(b, "bid", "bidder"), "bid bidder"),
                             as_number(require(b, "bid", "amount"), "bid amount")});
    }
    return spec;
}

DiceSpec parse_dice(const json& block) {
    check_keys(block, "bargaining.dice", {"sides_a", "sides_b", "players_a", "players_b"});
    DiceSpec spec;
    if (const json* v = optional_key(block, "sides_a")) spec.sides_a = as_int(*v, "sides_a");
    if (const json* v = optional_key(block, "sides_b")) spec.sides_b = as_int(*v, "sides_b");
    if (const json* v = optional_key(block, "players_a")) spec.players_a = as_int(*v, "players_a");
    if (const json* v = optional_key(block, "players_b")) spec.players_b = as_int(*v, "players_b");
    return spec;
}

BlindVoteSpec parse_blind_vote(const json& block) {
    check_keys(block, "bargaining.blind_vote", {"low", "high", "votes_a", "votes_b"});
    BlindVoteSpec spec;
    spec.low = as_number(require(block, "bargaining.blind_vote", "low"), "low");
    spec.high = as_number(require(block, "bargaining.blind_vote", "high"), "high");
    const auto read_votes = [](const json& v, const std::string& ctx) {
        if (!v.is_array()) fail(ctx + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) out.push_back(as_number(x, ctx + " entry"));
        return out;
    };
    spec.votes_a = read_votes(require(block, "bargaining.blind_vote", "votes_a"), "votes_a");
    spec.votes_b = read_votes(require(block, "bargaining.blind_vote", "votes_b"), "votes_b");
    return spec;
}

} // namespace

ScenarioConfig parse_config(const std::string& json_text, const std::string& config_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(errc::parse_error, e.what());
    }
    if (!root.is_object()) fail("config root must be an object");
    check_keys(root, "config", {"scenario", "bargaining"});

    const json& scenario = require(root, "config", "scenario");
    if (!scenario.is_object()) fail("scenario must be an object");
    check_keys(scenario, "scenario",
               {"kind", "rounds", "seed", "pagerank", "ubi", "lightning", "circles", "custom"});

    ScenarioConfig cfg;
    const std::string kind = as_string(require(scenario, "scenario", "kind"), "kind");
    if (kind == "pagerank")
        cfg.kind = ScenarioKind::pagerank;
    else if (kind == "ubi")
        cfg.kind = ScenarioKind::ubi;
    else if (kind == "lightning")
        cfg.kind = ScenarioKind::lightning;
    else if (kind == "circles")
        cfg.kind = ScenarioKind::circles;
    else if (kind == "custom")
        cfg.kind = ScenarioKind::custom;
    else
        fail("unknown scenario kind '" + kind + "'");

    cfg.rounds = as_int(require(scenario, "scenario", "rounds"), "rounds");
    if (cfg.rounds < 0) fail("rounds must be >= 0");
    if (const json* v = optional_key(scenario, "seed")) cfg.seed = as_seed(*v, "seed");

    // Exactly the block matching `kind` must be present.
    for (const char* block : {"pagerank", "ubi", "lightning", "circles", "custom"})
        if (block != kind && optional_key(scenario, block))
            fail("scenario block '" + std::string(block) + "' does not match kind '" + kind + "'");
    const json& block = require(scenario, "scenario", kind.c_str());
    if (!block.is_object()) fail("scenario." + kind + " must be an object");

    switch (cfg.kind) {
        case ScenarioKind::pagerank: cfg.pagerank = parse_pagerank(block); break;
        case ScenarioKind::ubi: cfg.ubi = parse_ubi(block); break;
        case ScenarioKind::lightning: cfg.lightning = parse_lightning(block); break;
        case ScenarioKind::circles: cfg.circles = parse_circles(block); break;
        case ScenarioKind::custom: cfg.custom = parse_custom(block, config_dir); break;
    }

    if (const json* barg = optional_key(root, "bargaining")) {
        if (!barg->is_object()) fail("bargaining must be an object");
        check_keys(*barg, "bargaining", {"auction", "dice", "blind_vote"});
        if (const json* v = optional_key(*barg, "auction")) cfg.bargaining.auction = parse_auction(*v);
        if (const json* v = optional_key(*barg, "dice")) cfg.bargaining.dice = parse_dice(*v);
        if (const json* v = optional_key(*barg, "blind_vote"))
            cfg.bargaining.blind_vote = parse_blind_vote(*v);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    return parse_config(text, std::filesystem::path(path).parent_path().string());
}

} // namespace tegsim
