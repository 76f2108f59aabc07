#include "nidsgnn/dataio/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nidsgnn::dataio {

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    // Simple CSV: no quoting; flow exports do not quote fields.
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::uint32_t RecordSet::label_of(std::size_t row, const FeatureSchema& schema) const {
    const std::string& cell = rows[row][col(schema.label)];
    double v;
    if (!parse_double(cell, v) || v < 0)
        throw std::runtime_error("bad label value '" + cell + "' in row " +
                                 std::to_string(row));
    return static_cast<std::uint32_t>(v);
}

std::uint64_t RecordSet::digest() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    };
    for (const auto& c : columns) mix(c);
    for (const auto& r : rows)
        for (const auto& cell : r) mix(cell);
    return h;
}

RecordSet load_csv(const std::string& path, const FeatureSchema& schema,
                   LoadStats* stats) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV file: " + path);

    RecordSet rs;
    rs.columns = split_csv_line(line);

    std::vector<std::string> required = schema.numeric;
    for (const auto& c : schema.categorical) required.push_back(c.name);
    required.push_back(schema.dest_ip);
    required.push_back(schema.dest_port);
    for (const auto& name : required)
        if (!rs.has_col(name))
            throw std::runtime_error("CSV " + path + " missing required column: " + name);

    std::vector<std::size_t> numeric_idx;
    for (const auto& name : schema.numeric) numeric_idx.push_back(rs.col(name));

    LoadStats local;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != rs.columns.size()) {
            ++local.rows_skipped;
            continue;
        }
        bool ok = true;
        double v;
        for (auto ci : numeric_idx)
            if (!parse_double(cells[ci], v)) {
                ok = false;
                break;
            }
        if (!ok) {
            ++local.rows_skipped;
            continue;
        }
        rs.rows.push_back(std::move(cells));
        ++local.rows_loaded;
    }
    if (stats) *stats = local;
    return rs;
}

void write_csv(const RecordSet& rs, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write CSV file: " + path);
    for (std::size_t i = 0; i < rs.columns.size(); ++i)
        f << (i ? "," : "") << rs.columns[i];
    f << "\n";
    for (const auto& row : rs.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << "\n";
    }
}

}  // namespace nidsgnn::dataio
