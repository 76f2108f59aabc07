#include "nidsgnn/classify/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace nidsgnn::classify {

MetricsReport compute_metrics(const std::vector<std::uint32_t>& y_true,
                              const std::vector<std::uint32_t>& y_pred,
                              std::size_t n_classes) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("compute_metrics: length mismatch");
    if (y_true.empty())
        throw std::invalid_argument("compute_metrics: need at least one sample");
    if (n_classes == 0) {
        std::uint32_t mx = 0;
        for (auto v : y_true) mx = std::max(mx, v);
        for (auto v : y_pred) mx = std::max(mx, v);
        n_classes = mx + 1;
    }

    MetricsReport r;
    r.n_samples = y_true.size();
    r.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] >= n_classes || y_pred[i] >= n_classes)
            throw std::invalid_argument("compute_metrics: label out of range");
        ++r.confusion[y_true[i]][y_pred[i]];
    }

    std::size_t pooled_tp = 0, pooled_fp = 0, pooled_fn = 0;
    double weighted = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::size_t tp = r.confusion[c][c], fp = 0, fn = 0, support = 0;
        for (std::size_t o = 0; o < n_classes; ++o) {
            support += r.confusion[c][o];
            if (o != c) {
                fn += r.confusion[c][o];
                fp += r.confusion[o][c];
            }
        }
        ClassScore s;
        s.support = support;
        s.precision = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
        s.recall = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
        s.f1 = (s.precision + s.recall) > 0.0
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
        r.per_class.push_back(s);
        weighted += s.f1 * double(support);
        pooled_tp += tp;
        pooled_fp += fp;
        pooled_fn += fn;
    }
    r.weighted_f1 = weighted / double(r.n_samples);
    const double pp = (pooled_tp + pooled_fp) ? double(pooled_tp) / double(pooled_tp + pooled_fp) : 0.0;
    const double pr = (pooled_tp + pooled_fn) ? double(pooled_tp) / double(pooled_tp + pooled_fn) : 0.0;
    r.micro_f1 = (pp + pr) > 0.0 ? 2.0 * pp * pr / (pp + pr) : 0.0;
    return r;
}

}  // namespace nidsgnn::classify
