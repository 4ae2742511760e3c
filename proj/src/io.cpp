#include "tegsim/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "tegsim/errors.hpp"

namespace tegsim {

std::string format_number(double v) {
    if (v == 0.0) return "0"; // fold -0 into 0 so reruns can't disagree on sign
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --- parsing helpers ----------------------------------------------------------

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
    throw Error(errc::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& field, std::size_t line_no) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        bad_line(line_no, "expected an integer, got '" + field + "'");
    return value;
}

double parse_double(const std::string& field, std::size_t line_no) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        bad_line(line_no, "expected a number, got '" + field + "'");
    return value;
}

struct Table {
    std::vector<std::vector<std::string>> rows; // data rows only
    std::size_t first_line = 2;                 // 1-based line number of rows[0]
};

Table read_table(const std::string& text, const std::string& header, std::size_t columns) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(errc::parse_error, "empty input, expected header '" + header + "'");
    if (lines[0] != header)
        throw Error(errc::parse_error,
                    "bad header '" + lines[0] + "', expected '" + header + "'");
    Table table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) bad_line(i + 1, "blank row");
        auto fields = split_fields(lines[i]);
        if (fields.size() != columns)
            bad_line(i + 1, "expected " + std::to_string(columns) + " fields, got " +
                                std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

} // namespace

// --- snapshots ------------------------------------------------------------------

std::string snapshots_to_csv(const std::vector<SnapshotRow>& rows) {
    std::string out = "round,layer,player,balance\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round);
        out += ',';
        out += r.layer;
        out += ',';
        out += r.player;
        out += ',';
        out += format_number(r.balance);
        out += '\n';
    }
    return out;
}

std::vector<SnapshotRow> snapshots_from_csv(const std::string& text) {
    const Table table = read_table(text, "round,layer,player,balance", 4);
    std::vector<SnapshotRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::size_t line_no = table.first_line + i;
        rows.push_back({parse_int(f[0], line_no), f[1], f[2], parse_double(f[3], line_no)});
    }
    return rows;
}

// --- transactions ------------------------------------------------------------------

std::string transactions_to_csv(const TransactionLog& log) {
    std::string out = "round,sender,receiver,amount\n";
    for (const auto& r : log) {
        out += std::to_string(r.round);
        out += ',';
        out += r.sender;
        out += ',';
        out += r.receiver;
        out += ',';
        out += format_number(r.amount);
        out += '\n';
    }
    return out;
}

TransactionLog transactions_from_csv(const std::string& text) {
    const Table table = read_table(text, "round,sender,receiver,amount", 4);
    TransactionLog log;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::size_t line_no = table.first_line + i;
        try {
            log.append({parse_int(f[0], line_no), f[1], f[2], parse_double(f[3], line_no)});
        } catch (const Error& e) {
            if (e.code() == errc::parse_error) throw;
            bad_line(line_no, e.what());
        }
    }
    return log;
}

// --- transfer matrices ------------------------------------------------------------

std::string matrix_to_csv(const TransferMatrix& matrix) {
    std::string out = "row,col,weight\n";
    for (const auto& [row, col, weight] : matrix.triplets()) {
        out += std::to_string(row);
        out += ',';
        out += std::to_string(col);
        out += ',';
        out += format_number(weight);
        out += '\n';
    }
    return out;
}

TransferMatrix matrix_from_csv(const std::string& text, std::optional<int> n) {
    const Table table = read_table(text, "row,col,weight", 3);
    struct Entry {
        int row, col;
        double weight;
    };
    std::vector<Entry> entries;
    int max_index = -1;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::size_t line_no = table.first_line + i;
        Entry e{parse_int(f[0], line_no), parse_int(f[1], line_no), parse_double(f[2], line_no)};
        if (e.row < 0 || e.col < 0) bad_line(line_no, "negative index");
        max_index = std::max({max_index, e.row, e.col});
        entries.push_back(e);
    }
    const int size = n.value_or(max_index + 1);
    if (size < 1) throw Error(errc::parse_error, "matrix has no entries and no explicit size");
    if (max_index >= size)
        throw Error(errc::parse_error, "index " + std::to_string(max_index) +
                                           " outside explicit size " + std::to_string(size));
    TransferMatrix m(size);
    for (const auto& e : entries) m.set(e.row, e.col, e.weight);
    return m;
}

// --- fungibility -------------------------------------------------------------------

std::string fungibility_to_csv(const FungibilityMatrix& rho) {
    std::string out = "layer_a,layer_b,rate\n";
    for (int i = 0; i < rho.size(); ++i)
        for (int j = 0; j < rho.size(); ++j) {
            if (i == j) continue;
            if (const auto r = rho.rate(i, j)) {
                out += rho.layers()[i];
                out += ',';
                out += rho.layers()[j];
                out += ',';
                out += format_number(*r);
                out += '\n';
            }
        }
    return out;
}

FungibilityMatrix fungibility_from_csv(const std::string& text) {
    const Table table = read_table(text, "layer_a,layer_b,rate", 3);
    std::set<std::string> labels;
    for (const auto& f : table.rows) {
        labels.insert(f[0]);
        labels.insert(f[1]);
    }
    FungibilityMatrix rho(std::vector<std::string>(labels.begin(), labels.end()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        const std::size_t line_no = table.first_line + i;
        try {
            rho.set(f[0], f[1], parse_double(f[2], line_no));
        } catch (const Error& e) {
            if (e.code() == errc::parse_error) throw;
            bad_line(line_no, e.what());
        }
    }
    return rho;
}

std::vector<PairValueRow> pair_values_from_csv(const std::string& text,
                                               const std::string& value_header) {
    const Table table = read_table(text, "layer_a,layer_b," + value_header, 3);
    std::vector<PairValueRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        rows.push_back({f[0], f[1], parse_double(f[2], table.first_line + i)});
    }
    return rows;
}

// --- metric tables -------------------------------------------------------------------

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::string out = "round,layer,supply,entropy_bits,zeta,zeta_star\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round);
        out += ',';
        out += r.layer;
        out += ',';
        out += format_number(r.supply);
        out += ',';
        out += format_number(r.entropy_bits);
        out += ',';
        if (r.zeta) out += format_number(*r.zeta);
        out += ',';
        if (r.zeta_star) out += format_number(*r.zeta_star);
        out += '\n';
    }
    return out;
}

std::string pairwise_to_csv(const std::vector<PairwiseRow>& rows) {
    std::string out = "round,layer_a,layer_b,x_r\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round);
        out += ',';
        out += r.layer_a;
        out += ',';
        out += r.layer_b;
        out += ',';
        out += format_number(r.x_r);
        out += '\n';
    }
    return out;
}

std::string bargaining_to_csv(const std::vector<BargainingRow>& rows) {
    std::string out = "round,mechanism,layer_a,layer_b,rate,detail\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round);
        out += ',';
        out += r.mechanism;
        out += ',';
        out += r.layer_a;
        out += ',';
        out += r.layer_b;
        out += ',';
        out += format_number(r.rate);
        out += ',';
        out += r.detail;
        out += '\n';
    }
    return out;
}

// --- fingerprints and files -----------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_error, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(errc::io_error, "read failed on '" + path + "'");
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io_error, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(errc::io_error, "write failed on '" + path + "'");
}

bool log_enabled() {
    static const bool enabled = [] {
        const char* v = std::getenv("TEGSIM_LOG");
        return v != nullptr && *v != '\0';
    }();
    return enabled;
}

void log_line(const std::string& message) {
    if (log_enabled()) std::cerr << "[tegsim] " << message << '\n';
}

} // namespace tegsim
