#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nidsgnn/dataio/synthetic.hpp"
#include "nidsgnn/encoder/model.hpp"

namespace nidsgnn::harness {

enum class Variant { D, T, D_SSL, T_SSL, DT };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct ExperimentConfig {
    // data: either CSV paths + schema, or a synthetic config
    std::string train_csv, test_csv, schema_path, allowlist_path;
    std::optional<dataio::SyntheticConfig> synthetic;
    std::size_t synthetic_test_flows = 4000;

    std::vector<Variant> variants = {Variant::D_SSL};
    std::size_t d_x = 128;
    std::size_t layers = 2;
    std::size_t d_emb = 64;
    std::size_t d_e = 64;
    std::size_t node_feat_width = 64;
    encoder::Aggregator aggregator = encoder::Aggregator::mean;
    double lr = 0.001;
    std::size_t pretrain_epochs = 300;
    std::size_t pretrain_patience = 50;
    std::size_t finetune_epochs = 200;
    std::size_t finetune_patience = 30;
    std::vector<std::size_t> fewshot_counts = {100, 500, 1000, 5000};
    std::size_t n_trials = 5;
    std::uint64_t base_seed = 1;
    std::size_t dt_min_samples_split = 5;
    dataio::Encoding dt_encoding = dataio::Encoding::onehot;
    std::string out_dir = "results";  // env NIDSGNN_OUT_DIR overrides

    void validate() const;
    std::uint64_t digest() const;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

}  // namespace nidsgnn::harness
