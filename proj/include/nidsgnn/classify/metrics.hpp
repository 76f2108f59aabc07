#pragma once

#include <cstdint>
#include <vector>

namespace nidsgnn::classify {

struct ClassScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct MetricsReport {
    std::vector<ClassScore> per_class;
    double micro_f1 = 0.0;     // pooled TP/FP/FN
    double weighted_f1 = 0.0;  // support-weighted mean of per-class F1
    std::vector<std::vector<std::size_t>> confusion;  // [true][pred]
    std::size_t n_samples = 0;
};

// One-vs-rest precision/recall/F1 per class (0 when a denominator is 0).
// n_classes = 0 infers max label + 1 from the inputs.
MetricsReport compute_metrics(const std::vector<std::uint32_t>& y_true,
                              const std::vector<std::uint32_t>& y_pred,
                              std::size_t n_classes = 0);

}  // namespace nidsgnn::classify
