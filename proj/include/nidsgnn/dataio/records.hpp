#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nidsgnn/dataio/schema.hpp"

namespace nidsgnn::dataio {

// Columnar table of raw flow records. Cells are kept as strings; typed
// access goes through the schema.
struct RecordSet {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::out_of_range("missing column: " + name);
    }

    bool has_col(const std::string& name) const {
        for (const auto& c : columns)
            if (c == name) return true;
        return false;
    }

    std::size_t size() const { return rows.size(); }

    // Class id parsed from the schema's label column.
    std::uint32_t label_of(std::size_t row, const FeatureSchema& schema) const;

    // Stable content digest (FNV-1a over all cells), used to stamp fitted
    // preprocessors with the split they were fit on.
    std::uint64_t digest() const;
};

struct LoadStats {
    std::size_t rows_loaded = 0;
    std::size_t rows_skipped = 0;  // malformed numeric cells
};

// Reads a CSV with a header row. Columns the schema does not mention are
// kept (they may carry endpoint/label roles); rows with non-numeric values
// in numeric columns are skipped and counted.
RecordSet load_csv(const std::string& path, const FeatureSchema& schema,
                   LoadStats* stats = nullptr);

void write_csv(const RecordSet& rs, const std::string& path);

}  // namespace nidsgnn::dataio
