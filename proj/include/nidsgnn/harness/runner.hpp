#pragma once

#include <map>
#include <string>
#include <vector>

#include "nidsgnn/classify/finetune.hpp"
#include "nidsgnn/classify/metrics.hpp"
#include "nidsgnn/dataio/preprocess.hpp"
#include "nidsgnn/harness/config.hpp"
#include "nidsgnn/ssl/dgi.hpp"

namespace nidsgnn::harness {

// Derives independent per-stage seeds (splitmix64 finalizer). Stage salts:
// 7 = model init, 11 = few-shot sampling, 13 = pre-training corruption,
// 100/101/102 = full-train / fine-tune / test graph construction.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

struct TrialResult {
    Variant variant;
    std::uint64_t seed = 0;
    std::size_t n_labels = 0;  // labels used for supervised training
    classify::MetricsReport metrics;
    double wall_seconds = 0.0;
    std::vector<ssl::EpochLoss> pretrain_history;
    std::vector<classify::EpochLoss> finetune_history;
    std::vector<unsigned char> checkpoint;  // pretrained weights (SSL variants)
};

struct Aggregate {
    double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
    double q1 = 0.0, median = 0.0, q3 = 0.0;  // box-plot quartiles
};

struct ResultsTable {
    std::vector<TrialResult> trials;
    // per (variant, n_labels) aggregates of weighted-F1
    std::map<std::pair<std::string, std::size_t>, Aggregate> aggregates;

    void recompute_aggregates();
};

// Shared per-run state: loaded splits, fitted preprocessor, both encodings.
struct Workspace {
    dataio::FeatureSchema schema;
    dataio::RecordSet train, test;
    dataio::FittedPreprocessor prep;
    std::size_t n_classes = 2;
    std::uint64_t config_digest = 0;

    static Workspace prepare(const ExperimentConfig& cfg);
};

// Feature encoding used by a variant (D* -> one-hot, T* -> target,
// DT -> cfg.dt_encoding).
dataio::Encoding variant_encoding(const ExperimentConfig& cfg, Variant v);

// Model layout for a variant given the fitted preprocessor's widths.
encoder::ModelConfig make_model_config(const ExperimentConfig& cfg,
                                       const Workspace& ws, Variant v);

// Full-data protocol: every variant trained on all training labels,
// n_trials seeds, evaluated on the held-out test graph.
ResultsTable run_full_data(const ExperimentConfig& cfg);

// Few-shot sweep: SSL variants pre-train once per seed on the full unlabeled
// training graph, then fine-tune per balanced label budget; non-SSL variants
// train from scratch per budget. Test graph fixed across budgets.
ResultsTable run_fewshot_sweep(const ExperimentConfig& cfg);

// One trial of one variant; n_labels==0 means the full training set.
// pretrained (optional) supplies checkpoint bytes to start fine-tuning from.
TrialResult run_trial(const ExperimentConfig& cfg, const Workspace& ws,
                      Variant variant, std::uint64_t seed, std::size_t n_labels,
                      const std::vector<unsigned char>* pretrained = nullptr);

// JSON/CSV serialization of results.
std::string results_json(const ResultsTable& table, const ExperimentConfig& cfg);
std::string aggregates_csv(const ResultsTable& table);
std::string metrics_json(const classify::MetricsReport& m);

}  // namespace nidsgnn::harness
