#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tegsim/engine.hpp"
#include "tegsim/matrix.hpp"
#include "tegsim/multilayer.hpp"

namespace tegsim {

// Canonical number rendering for every CSV and manifest value: %.12g. Twelve
// significant digits round-trip the 1e-9 tolerances the formats promise while
// keeping rerun outputs byte-identical.
std::string format_number(double v);

// All readers reject a wrong header or malformed row with parse_error naming
// the line. Labels are CSV-safe by construction (no commas/quotes/newlines),
// so the formats need no quoting rules.

// snapshots.csv: round,layer,player,balance
struct SnapshotRow {
    int round;
    std::string layer;
    std::string player;
    double balance;
};
std::string snapshots_to_csv(const std::vector<SnapshotRow>& rows);
std::vector<SnapshotRow> snapshots_from_csv(const std::string& text);

// transactions.csv: round,sender,receiver,amount
std::string transactions_to_csv(const TransactionLog& log);
TransactionLog transactions_from_csv(const std::string& text);

// matrix.csv: row,col,weight — triplets in column-then-row order. The reader
// sizes the matrix from the largest index seen (or the optional explicit n).
std::string matrix_to_csv(const TransferMatrix& matrix);
TransferMatrix matrix_from_csv(const std::string& text, std::optional<int> n = {});

// fungibility.csv: layer_a,layer_b,rate — one row per *available* directed
// rate; absent pairs stay unavailable. Diagonal rows are implied and not
// written. The reader's layer order is sorted, so layers with no posted rate
// in either direction do not survive a round-trip.
std::string fungibility_to_csv(const FungibilityMatrix& rho);
FungibilityMatrix fungibility_from_csv(const std::string& text);

// Generic layer_a,layer_b,value table — the kappa/mu side files.
struct PairValueRow {
    std::string a;
    std::string b;
    double value;
};
std::vector<PairValueRow> pair_values_from_csv(const std::string& text,
                                               const std::string& value_header);

// metrics.csv: round,layer,supply,entropy_bits,zeta,zeta_star. The zeta cells
// are empty on each layer's final row: no matrix was applied after it.
struct MetricsRow {
    int round;
    std::string layer;
    double supply;
    double entropy_bits;
    std::optional<double> zeta;
    std::optional<double> zeta_star;
};
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);

// pairwise.csv: round,layer_a,layer_b,x_r — the circulating-supply price of
// layer_a in layer_b units, rows only where both sides are defined.
struct PairwiseRow {
    int round;
    std::string layer_a;
    std::string layer_b;
    double x_r;
};
std::string pairwise_to_csv(const std::vector<PairwiseRow>& rows);

// bargaining.csv: round,mechanism,layer_a,layer_b,rate,detail. The detail
// field is ;-separated key=value pairs, commas excluded by construction.
struct BargainingRow {
    int round;
    std::string mechanism;
    std::string layer_a;
    std::string layer_b;
    double rate;
    std::string detail;
};
std::string bargaining_to_csv(const std::vector<BargainingRow>& rows);

// FNV-1a, 64-bit — the manifest's file fingerprint.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

std::string read_text_file(const std::string& path);       // io_error
void write_text_file(const std::string& path, const std::string& content);

// Diagnostic logging to stderr, enabled by setting TEGSIM_LOG (any non-empty
// value). Output never goes to stdout, which belongs to the data formats.
bool log_enabled();
void log_line(const std::string& message);

} // namespace tegsim
