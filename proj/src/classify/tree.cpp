#include "nidsgnn/classify/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace nidsgnn::classify {

namespace {

double gini_of(const std::vector<std::size_t>& counts, std::size_t total) {
    double g = 1.0;
    for (std::size_t c : counts) {
        const double p = double(c) / double(total);
        g -= p * p;
    }
    return g;
}

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gini = 0.0;  // weighted child gini
};

// Sorted sweep per feature; candidate thresholds are midpoints between
// consecutive distinct values. Tie-break: lowest feature, then lowest
// threshold (guaranteed by scan order and strict improvement test).
Split find_split(const nn::Matrix& x, const std::vector<std::uint32_t>& y,
                 const std::vector<std::size_t>& rows, std::size_t n_classes) {
    Split best;
    const std::size_t n = rows.size();
    std::vector<std::size_t> order(rows);
    std::vector<std::size_t> total_counts(n_classes, 0);
    for (auto r : rows) ++total_counts[y[r]];

    for (std::size_t f = 0; f < x.cols; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return x(a, f) < x(b, f);
        });
        std::vector<std::size_t> left_counts(n_classes, 0);
        std::size_t n_left = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ++left_counts[y[order[i]]];
            ++n_left;
            const double a = x(order[i], f);
            const double b = x(order[i + 1], f);
            if (a == b) continue;
            const double thr = a + (b - a) / 2.0;
            std::vector<std::size_t> right_counts(n_classes);
            for (std::size_t c = 0; c < n_classes; ++c)
                right_counts[c] = total_counts[c] - left_counts[c];
            const std::size_t n_right = n - n_left;
            const double g = (double(n_left) * gini_of(left_counts, n_left) +
                              double(n_right) * gini_of(right_counts, n_right)) /
                             double(n);
            if (!best.found || g < best.gini - 1e-15) {
                best = {true, f, thr, g};
            }
        }
    }
    return best;
}

std::int32_t grow(DecisionTree& tree, const nn::Matrix& x,
                  const std::vector<std::uint32_t>& y,
                  const std::vector<std::size_t>& rows) {
    DecisionTree::Node node;
    node.class_counts.assign(tree.n_classes, 0);
    for (auto r : rows) ++node.class_counts[y[r]];
    std::size_t best_c = 0;
    for (std::size_t c = 1; c < tree.n_classes; ++c)
        if (node.class_counts[c] > node.class_counts[best_c]) best_c = c;
    node.cls = std::uint32_t(best_c);

    const bool pure = node.class_counts[best_c] == rows.size();
    if (!pure && rows.size() >= tree.min_samples_split) {
        Split s = find_split(x, y, rows, tree.n_classes);
        if (s.found) {
            std::vector<std::size_t> lrows, rrows;
            for (auto r : rows)
                (x(r, s.feature) <= s.threshold ? lrows : rrows).push_back(r);
            if (!lrows.empty() && !rrows.empty()) {
                node.feature = s.feature;
                node.threshold = s.threshold;
                const std::int32_t id = std::int32_t(tree.nodes.size());
                tree.nodes.push_back(node);
                const std::int32_t l = grow(tree, x, y, lrows);
                const std::int32_t r = grow(tree, x, y, rrows);
                tree.nodes[id].left = l;
                tree.nodes[id].right = r;
                return id;
            }
        }
    }
    tree.nodes.push_back(node);
    return std::int32_t(tree.nodes.size() - 1);
}

}  // namespace

DecisionTree train_decision_tree(const nn::Matrix& x,
                                 const std::vector<std::uint32_t>& y,
                                 std::size_t min_samples_split) {
    if (x.rows == 0) throw std::invalid_argument("train_decision_tree: empty dataset");
    if (y.size() != x.rows)
        throw std::invalid_argument("train_decision_tree: label count mismatch");
    DecisionTree tree;
    tree.min_samples_split = std::max<std::size_t>(min_samples_split, 2);
    std::uint32_t mx = 0;
    for (auto v : y) mx = std::max(mx, v);
    tree.n_classes = mx + 1;
    std::vector<std::size_t> rows(x.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    grow(tree, x, y, rows);
    return tree;
}

std::vector<std::uint32_t> dt_predict(const DecisionTree& tree, const nn::Matrix& x) {
    std::vector<std::uint32_t> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        std::int32_t cur = 0;
        while (tree.nodes[cur].left >= 0) {
            const auto& nd = tree.nodes[cur];
            cur = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
        }
        out[i] = tree.nodes[cur].cls;
    }
    return out;
}

}  // namespace nidsgnn::classify
