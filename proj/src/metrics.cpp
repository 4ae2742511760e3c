#include "tegsim/metrics.hpp"

#include <cmath>
#include <limits>

#include "tegsim/errors.hpp"

namespace tegsim {

TokenDistribution normalize(const std::vector<double>& balances) {
    double sum = 0.0;
    for (double b : balances) {
        if (!(b >= 0.0) || !std::isfinite(b))
            throw Error(errc::validation_error, "balances must be finite and non-negative");
        sum += b;
    }
    if (sum <= 0.0)
        throw Error(errc::zero_supply, "cannot normalize a layer holding nothing");
    TokenDistribution out;
    out.p.reserve(balances.size());
    for (double b : balances) out.p.push_back(b / sum);
    return out;
}

TokenDistribution normalize(const LayerState& state) { return normalize(state.balances()); }

double entropy(const TokenDistribution& dist) {
    if (dist.p.empty())
        throw Error(errc::validation_error, "empty distribution has no entropy");
    double h = 0.0;
    double sum = 0.0;
    for (double p : dist.p) {
        if (p < 0.0 || p > 1.0 + 1e-9 || !std::isfinite(p))
            throw Error(errc::validation_error, "distribution entries must be in [0, 1]");
        sum += p;
        if (p > 0.0 && p < 1.0) h -= p * std::log2(p);
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw Error(errc::validation_error,
                    "distribution entries must sum to 1, got " + std::to_string(sum));
    // -0.0 creeps in when the distribution is degenerate; keep zero signless.
    return h == 0.0 ? 0.0 : h;
}

double relative_entropy(const TokenDistribution& p, const TokenDistribution& q) {
    if (p.p.size() != q.p.size())
        throw Error(errc::dimension_mismatch,
                    "distributions of size " + std::to_string(p.p.size()) + " and " +
                        std::to_string(q.p.size()));
    double d = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) {
        const double pi = p.p[i], qi = q.p[i];
        if (pi < 0.0 || qi < 0.0)
            throw Error(errc::validation_error, "distribution entries must be non-negative");
        if (pi == 0.0) continue;
        if (qi == 0.0) return std::numeric_limits<double>::infinity();
        d += pi * std::log2(pi / qi);
    }
    // Rounding can push the sum a hair under zero for p == q; the divergence
    // itself is never negative.
    return d < 0.0 && d > -1e-12 ? 0.0 : d;
}

double rounds_to_target(const TokenDistribution& current, const TokenDistribution& target,
                        double ell) {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw Error(errc::non_positive_rate,
                    "divergence decay rate must be positive, got " + std::to_string(ell));
    const double d = relative_entropy(current, target);
    if (std::isinf(d))
        throw Error(errc::infinite_divergence,
                    "target unreachable: current distribution puts mass where the target has none");
    return d / ell;
}

double estimate_divergence_rate(const std::vector<TokenDistribution>& trajectory,
                                const TokenDistribution& target) {
    if (trajectory.size() < 2)
        throw Error(errc::validation_error,
                    "need at least two snapshots to estimate the decay rate");
    double first = relative_entropy(trajectory.front(), target);
    double last = relative_entropy(trajectory.back(), target);
    if (std::isinf(first) || std::isinf(last))
        throw Error(errc::infinite_divergence, "trajectory passes through infinite divergence");
    return (first - last) / static_cast<double>(trajectory.size() - 1);
}

CirculationReport zeta(const TransferMatrix& matrix, const std::vector<int>& active) {
    std::vector<int> slots = active;
    if (slots.empty())
        for (int i = 0; i < matrix.size(); ++i) slots.push_back(i);
    if (slots.empty())
        throw Error(errc::empty_active_set, "no slots to average the self-loops over");
    double sum = 0.0;
    for (int s : slots) sum += matrix.diagonal(s); // diagonal() bounds-checks
    const double z = sum / static_cast<double>(slots.size());
    return {z, 1.0 - z, static_cast<int>(slots.size())};
}

double zeta_global(const std::vector<double>& zetas) {
    if (zetas.empty())
        throw Error(errc::empty_index_sets, "no zeta values to average");
    double sum = 0.0;
    for (double z : zetas) sum += z;
    return sum / static_cast<double>(zetas.size());
}

double inflation_ratio(double zeta1, double chi1, double zeta2, double chi2) {
    const double demand = (1.0 - zeta2) * chi2;
    if (!(demand > 0.0))
        throw Error(errc::no_demand, "(1-zeta)*chi of the quote layer must be positive, got " +
                                         std::to_string(demand));
    return (1.0 - zeta1) * chi1 / demand;
}

ExchangeIdentity exchange_identity(double zeta1, double chi1, double zeta2, double chi2) {
    const double q = (1.0 - zeta2) * chi2;
    return {chi1, 1.0 - zeta1, inflation_ratio(zeta1, chi1, zeta2, chi2), q};
}

} // namespace tegsim
