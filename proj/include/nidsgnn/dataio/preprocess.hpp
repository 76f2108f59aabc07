#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nidsgnn/dataio/records.hpp"
#include "nidsgnn/nn/matrix.hpp"

namespace nidsgnn::dataio {

enum class Encoding { onehot, target };

// Encoded feature block plus everything downstream stages need: labels and
// the raw endpoint columns for graph construction.
struct EncodedDataset {
    nn::Matrix features;  // n x (numeric_width + categorical_width)
    std::size_t numeric_width = 0;
    std::size_t categorical_width = 0;
    Encoding encoding = Encoding::onehot;
    std::vector<std::uint32_t> labels;  // empty when unlabeled
    std::vector<std::string> src_ip, dst_ip, dst_port;

    std::size_t size() const { return features.rows; }
    std::size_t width() const { return features.cols; }
};

// Frozen preprocessing state: standardization constants, vocabularies with
// an unknown slot, the target-encoding table, and the allowlist.
class FittedPreprocessor {
public:
    struct NumericStat {
        std::string name;
        double mean = 0.0;
        double stddev = 1.0;
        bool log2_applied = false;
    };
    struct CatVocab {
        std::string name;
        std::map<std::string, std::uint32_t> index;  // category -> slot
        std::uint32_t unknown_slot = 0;              // == index.size()
        std::uint32_t size = 0;                      // categories + unknown
        std::map<std::string, double> target_enc;    // empty if unlabeled fit
    };

    // Fits on the TRAINING split only. Zero-variance numeric features are
    // dropped with a warning to stderr. allowlist_path may be empty when the
    // schema declares no allowlist column.
    static FittedPreprocessor fit(const RecordSet& train, const FeatureSchema& schema,
                                  const std::string& allowlist_path = "");
    static FittedPreprocessor fit(const RecordSet& train, const FeatureSchema& schema,
                                  std::set<std::string> allowlist);
    static std::set<std::string> load_allowlist(const std::string& path);
    static std::set<std::string> parse_allowlist(const std::string& text);

    EncodedDataset transform_onehot(const RecordSet& rs) const;
    EncodedDataset transform_target(const RecordSet& rs) const;
    EncodedDataset transform(const RecordSet& rs, Encoding enc) const {
        return enc == Encoding::onehot ? transform_onehot(rs) : transform_target(rs);
    }

    const std::vector<NumericStat>& numeric_stats() const { return numeric_; }
    const std::vector<std::string>& dropped_numeric() const { return dropped_; }
    const std::vector<CatVocab>& vocabs() const { return cats_; }
    double global_target_mean() const { return global_target_mean_; }
    bool has_target_table() const { return has_target_table_; }
    std::uint64_t fit_digest() const { return fit_digest_; }
    bool allowlisted(const std::string& query) const;

    std::size_t onehot_width() const;
    std::size_t target_width() const;
    std::size_t numeric_width() const { return numeric_.size(); }

    static constexpr double kTargetSmoothing = 10.0;

private:
    FeatureSchema schema_;
    std::vector<NumericStat> numeric_;
    std::vector<std::string> dropped_;
    std::vector<CatVocab> cats_;  // includes synthetic allowlist feature last
    bool has_allowlist_feature_ = false;
    std::set<std::string> allowlist_;
    double global_target_mean_ = 0.0;
    bool has_target_table_ = false;
    std::uint64_t fit_digest_ = 0;

    double standardized(std::size_t stat_idx, double raw) const;
    void fill_common(const RecordSet& rs, EncodedDataset& out) const;
};

}  // namespace nidsgnn::dataio
