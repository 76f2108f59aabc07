#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nidsgnn::dataio {

// Declarative description of the columns in a flow CSV: which are numeric,
// which are bounded categoricals (vocabulary discovered at fit time unless
// declared), which are unbounded and therefore dropped, and which columns
// identify endpoints and labels. Parsed from a plain "key: value" file.
struct FeatureSchema {
    struct Categorical {
        std::string name;
        std::vector<std::string> vocabulary;  // empty = learn from data
    };

    std::vector<std::string> numeric;
    std::vector<Categorical> categorical;
    std::vector<std::string> unbounded;
    std::optional<std::string> allowlist_column;
    std::string source_ip;
    std::string dest_ip;
    std::string dest_port;
    std::string label;
    std::string attack_category;

    std::size_t r_num() const { return numeric.size(); }
    std::size_t r_cat() const { return categorical.size(); }

    // Throws std::invalid_argument on overlapping column roles or an empty
    // feature set.
    void validate() const;

    static FeatureSchema parse(const std::string& text);
    static FeatureSchema load(const std::string& path);
    std::string to_text() const;
};

}  // namespace nidsgnn::dataio
