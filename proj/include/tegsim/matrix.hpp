#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace tegsim {

// Sparse column-stochastic transfer weights. Rows receive, columns send:
// entry (i, j) is the share of slot j's balance moving to slot i in one round,
// so every column must sum to 1 (within 1e-9) and a valid matrix conserves
// supply. Zero shares are represented by absence — validation flags stored
// zeros — which keeps entry_count() equal to the size of the underlying
// transfer graph.
class TransferMatrix {
public:
    explicit TransferMatrix(int n);
    static TransferMatrix identity(int n);

    int size() const { return n_; }

    // Inserts or overwrites one entry. Indices are checked, values are not:
    // validate() is the gate, so tests can build deliberately broken matrices.
    void set(int row, int col, double weight);

    double entry(int row, int col) const; // 0 when absent
    double diagonal(int slot) const { return entry(slot, slot); }
    std::size_t entry_count() const { return count_; }

    // (row, weight) pairs of one column, ordered by row.
    const std::vector<std::pair<int, double>>& column(int col) const;

    // W * x. No validity check here; callers gate on validate() first.
    std::vector<double> apply(const std::vector<double>& x) const;

    // All entries as (row, col, weight), ordered by column then row — the
    // canonical order used by the CSV dump.
    std::vector<std::tuple<int, int, double>> triplets() const;

    struct Verdict {
        bool ok = true;
        int column = -1;    // first offending column, -1 when ok
        std::string detail; // human-readable description of the violation
    };

    // Checks shape: every stored weight in (0, 1] and finite, every column
    // summing to 1 within `tol`. A column with no entries fails (its sender
    // would destroy its balance).
    Verdict validate(double tol = 1e-9) const;

    // Rescales each column to sum exactly to 1, provided no column drifted
    // further than `max_drift` from 1; larger drift throws invalid_matrix.
    TransferMatrix renormalized(double max_drift = 1e-6) const;

private:
    int n_ = 0;
    std::size_t count_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
};

} // namespace tegsim
