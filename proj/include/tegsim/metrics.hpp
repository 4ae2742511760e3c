#pragma once

#include <vector>

#include "tegsim/engine.hpp"
#include "tegsim/matrix.hpp"

namespace tegsim {

// Balances scaled to a probability vector (entries sum to 1, all >= 0).
struct TokenDistribution {
    std::vector<double> p;
};

TokenDistribution normalize(const std::vector<double>& balances); // zero_supply when empty supply
TokenDistribution normalize(const LayerState& state);

// Shannon entropy in bits, with the 0*log(0) terms dropped. Ranges over
// [0, log2(n)]: 0 for a single holder, log2(n) for the uniform spread.
double entropy(const TokenDistribution& dist);

// Kullback-Leibler divergence D(p||q) in bits. Returns +infinity when p puts
// mass where q has none; that marker is reported rather than thrown so callers
// can decide whether an unreachable target is an error.
double relative_entropy(const TokenDistribution& p, const TokenDistribution& q);

// How many rounds to within-noise of the target: D(current||target) divided by
// the per-round divergence decay rate `ell` (caller-supplied, > 0).
double rounds_to_target(const TokenDistribution& current, const TokenDistribution& target,
                        double ell);

// Mean per-round drop of D(p_r||target) over a trajectory — a plug-in
// estimator for the `ell` above. Needs at least two snapshots and finite
// divergences throughout.
double estimate_divergence_rate(const std::vector<TokenDistribution>& trajectory,
                                const TokenDistribution& target);

struct CirculationReport {
    double zeta;      // mean self-loop weight over the active slots
    double zeta_star; // 1 - zeta, the circulating share
    int active_count;
};

// Hoarding coefficient of one transfer matrix. `active` selects the slots to
// average over (players actually in the game this round); empty means all.
CirculationReport zeta(const TransferMatrix& matrix, const std::vector<int>& active = {});

// Grand mean over a table of per-layer/per-round zeta values.
double zeta_global(const std::vector<double>& zetas);

// Price of basket 1 in units of basket 2: circulating supply ratio
// ((1-zeta1)*chi1) / ((1-zeta2)*chi2). The denominator must be positive.
double inflation_ratio(double zeta1, double chi1, double zeta2, double chi2);

// The money/velocity/price/quantity reading of the same numbers:
// m = chi1, v = 1-zeta1, p = inflation ratio, q = (1-zeta2)*chi2,
// so m*v == p*q by construction.
struct ExchangeIdentity {
    double m, v, p, q;
};

ExchangeIdentity exchange_identity(double zeta1, double chi1, double zeta2, double chi2);

} // namespace tegsim
