#include "tegsim/errors.hpp"

namespace tegsim {

const char* errc_name(errc code) noexcept {
    switch (code) {
    case errc::dimension_mismatch:    return "dimension mismatch";
    case errc::invalid_matrix:        return "invalid matrix";
    case errc::negative_balance_risk: return "negative balance risk";
    case errc::insufficient_balance:  return "insufficient balance";
    case errc::supply_mismatch:       return "supply mismatch";
    case errc::unknown_player:        return "unknown player";
    case errc::unknown_layer:         return "unknown layer";
    case errc::overspend:             return "overspend";
    case errc::zero_supply:           return "zero supply";
    case errc::empty_token_set:       return "empty token set";
    case errc::rate_unavailable:      return "rate unavailable";
    case errc::empty_active_set:      return "empty active set";
    case errc::empty_index_sets:      return "empty index sets";
    case errc::no_demand:             return "no demand";
    case errc::non_positive_rate:     return "non-positive rate";
    case errc::infinite_divergence:   return "infinite divergence";
    case errc::treasury_depleted:     return "treasury depleted";
    case errc::dangling_page:         return "dangling page";
    case errc::empty_graph:           return "empty graph";
    case errc::empty_voter_set:       return "empty voter set";
    case errc::missing_mu:            return "missing mu";
    case errc::cost_edge_mismatch:    return "cost/edge mismatch";
    case errc::parse_error:           return "parse error";
    case errc::validation_error:      return "validation error";
    case errc::io_error:              return "io error";
    }
    return "unknown error";
}

} // namespace tegsim
