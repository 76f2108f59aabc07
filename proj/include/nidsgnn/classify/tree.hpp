#pragma once

#include <cstdint>
#include <vector>

#include "nidsgnn/nn/matrix.hpp"

namespace nidsgnn::classify {

// CART with the gini criterion. Greedy growth; a node becomes a leaf when it
// is pure or holds fewer than min_samples_split samples. Impurity ties break
// on the lowest feature index, then the lowest threshold.
struct DecisionTree {
    struct Node {
        // internal: feature/threshold valid, left/right >= 0
        // leaf: left == -1, cls is the majority class
        std::size_t feature = 0;
        double threshold = 0.0;
        std::int32_t left = -1, right = -1;
        std::uint32_t cls = 0;
        std::vector<std::size_t> class_counts;
    };
    std::vector<Node> nodes;
    std::size_t min_samples_split = 5;
    std::size_t n_classes = 0;
};

DecisionTree train_decision_tree(const nn::Matrix& x,
                                 const std::vector<std::uint32_t>& y,
                                 std::size_t min_samples_split = 5);

std::vector<std::uint32_t> dt_predict(const DecisionTree& tree, const nn::Matrix& x);

}  // namespace nidsgnn::classify
