#pragma once

#include <stdexcept>
#include <string>

namespace tegsim {

// Every failure the library can signal. Codes are stable; messages are for
// humans and may change.
enum class errc {
    dimension_mismatch,
    invalid_matrix,
    negative_balance_risk,
    insufficient_balance,
    supply_mismatch,
    unknown_player,
    unknown_layer,
    overspend,
    zero_supply,
    empty_token_set,
    rate_unavailable,
    empty_active_set,
    empty_index_sets,
    no_demand,
    non_positive_rate,
    infinite_divergence,
    treasury_depleted,
    dangling_page,
    empty_graph,
    empty_voter_set,
    missing_mu,
    cost_edge_mismatch,
    parse_error,
    validation_error,
    io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace tegsim
