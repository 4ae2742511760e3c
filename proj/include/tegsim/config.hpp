#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tegsim/bargaining.hpp"
#include "tegsim/scenarios.hpp"

namespace tegsim {

enum class ScenarioKind { pagerank, ubi, lightning, circles, custom };

std::string to_string(ScenarioKind kind);

struct LightningConfig {
    std::vector<std::pair<std::string, double>> players;     // main-layer balances
    std::vector<std::pair<std::string, double>> commitments; // who locks how much
};

struct CirclesConfig {
    std::vector<std::pair<std::string, std::string>> trust_edges;
    int attach_m = 2;
};

struct CustomConfig {
    std::vector<std::pair<std::string, double>> players;
    std::string transactions_file; // resolved against the config's directory
};

struct BargainingConfig {
    std::optional<AuctionSpec> auction;
    std::optional<DiceSpec> dice;
    std::optional<BlindVoteSpec> blind_vote;

    bool any() const { return auction || dice || blind_vote; }
};

// One parsed run request. Only the block matching `kind` is populated; the
// optional bargaining block rides along with any kind.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::custom;
    int rounds = 0;          // required, >= 0
    std::uint64_t seed = 0;  // default 0, CLI may override
    PageRankSpec pagerank;
    UbiSpec ubi;
    LightningConfig lightning;
    CirclesConfig circles;
    CustomConfig custom;
    BargainingConfig bargaining;
};

// Strict parser: unknown keys anywhere are rejected by name, required keys
// must be present, and every value must have the right JSON type. `config_dir`
// anchors relative file references (the custom scenario's transaction CSV).
ScenarioConfig parse_config(const std::string& json_text, const std::string& config_dir);
ScenarioConfig load_config(const std::string& path);

} // namespace tegsim
