#include "tegsim/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "tegsim/errors.hpp"

namespace tegsim {

TransferMatrix::TransferMatrix(int n) : n_(n) {
    if (n < 0) throw Error(errc::dimension_mismatch, "negative matrix size");
    cols_.resize(static_cast<std::size_t>(n));
}

TransferMatrix TransferMatrix::identity(int n) {
    TransferMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

void TransferMatrix::set(int row, int col, double weight) {
    if (row < 0 || row >= n_ || col < 0 || col >= n_)
        throw Error(errc::dimension_mismatch, "entry (" + std::to_string(row) + ", " +
                                                  std::to_string(col) + ") outside " +
                                                  std::to_string(n_) + "x" + std::to_string(n_));
    auto& column = cols_[static_cast<std::size_t>(col)];
    auto it = std::lower_bound(column.begin(), column.end(), row,
                               [](const auto& e, int r) { return e.first < r; });
    if (it != column.end() && it->first == row) {
        it->second = weight;
    } else {
        column.insert(it, {row, weight});
        ++count_;
    }
}

double TransferMatrix::entry(int row, int col) const {
    if (row < 0 || row >= n_ || col < 0 || col >= n_)
        throw Error(errc::dimension_mismatch, "entry (" + std::to_string(row) + ", " +
                                                  std::to_string(col) + ") outside " +
                                                  std::to_string(n_) + "x" + std::to_string(n_));
    const auto& column = cols_[static_cast<std::size_t>(col)];
    auto it = std::lower_bound(column.begin(), column.end(), row,
                               [](const auto& e, int r) { return e.first < r; });
    if (it != column.end() && it->first == row) return it->second;
    return 0.0;
}

const std::vector<std::pair<int, double>>& TransferMatrix::column(int col) const {
    if (col < 0 || col >= n_)
        throw Error(errc::dimension_mismatch, "column " + std::to_string(col) + " outside " +
                                                  std::to_string(n_) + "x" + std::to_string(n_));
    return cols_[static_cast<std::size_t>(col)];
}

std::vector<double> TransferMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw Error(errc::dimension_mismatch,
                    "vector of size " + std::to_string(x.size()) + " against " +
                        std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
    std::vector<double> y(x.size(), 0.0);
    for (int col = 0; col < n_; ++col) {
        const double src = x[static_cast<std::size_t>(col)];
        if (src == 0.0) continue;
        for (const auto& [row, weight] : cols_[static_cast<std::size_t>(col)])
            y[static_cast<std::size_t>(row)] += weight * src;
    }
    return y;
}

std::vector<std::tuple<int, int, double>> TransferMatrix::triplets() const {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(count_);
    for (int col = 0; col < n_; ++col)
        for (const auto& [row, weight] : cols_[static_cast<std::size_t>(col)])
            out.emplace_back(row, col, weight);
    return out;
}

TransferMatrix::Verdict TransferMatrix::validate(double tol) const {
    for (int col = 0; col < n_; ++col) {
        double sum = 0.0;
        for (const auto& [row, weight] : cols_[static_cast<std::size_t>(col)]) {
            if (!std::isfinite(weight) || weight <= 0.0 || weight > 1.0)
                return {false, col,
                        "entry (" + std::to_string(row) + ", " + std::to_string(col) + ") = " +
                            std::to_string(weight) + " outside (0, 1]"};
            sum += weight;
        }
        if (std::fabs(sum - 1.0) > tol)
            return {false, col,
                    "column " + std::to_string(col) + " sums to " + std::to_string(sum)};
    }
    return {};
}

TransferMatrix TransferMatrix::renormalized(double max_drift) const {
    TransferMatrix out(n_);
    for (int col = 0; col < n_; ++col) {
        double sum = 0.0;
        for (const auto& [row, weight] : cols_[static_cast<std::size_t>(col)]) sum += weight;
        if (std::fabs(sum - 1.0) > max_drift)
            throw Error(errc::invalid_matrix, "column " + std::to_string(col) + " sum " +
                                                  std::to_string(sum) +
                                                  " drifted beyond repair threshold");
        for (const auto& [row, weight] : cols_[static_cast<std::size_t>(col)])
            out.set(row, col, weight / sum);
    }
    return out;
}

} // namespace tegsim
