#pragma once

#include <cstdint>
#include <vector>

#include "nidsgnn/encoder/model.hpp"
#include "nidsgnn/flowgraph/graph.hpp"

namespace nidsgnn::classify {

struct FinetuneConfig {
    std::size_t epochs = 200;
    std::size_t patience = 30;
    double lr = 0.001;
    bool freeze_encoder = false;  // ablation: only the head trains
};

struct EpochLoss {
    std::size_t epoch;
    double loss;
};

// Full-graph supervised training of head + encoder + front-end (dense mode)
// with softmax cross-entropy over edge labels.
std::vector<EpochLoss> finetune(const flowgraph::FlowGraph& g,
                                const std::vector<std::uint32_t>& labels,
                                encoder::Model& model, const FinetuneConfig& cfg);

struct Prediction {
    std::vector<std::uint32_t> classes;  // argmax per edge
    nn::Matrix probabilities;            // |E| x n_classes, rows sum to 1
};

Prediction predict(const flowgraph::FlowGraph& g, encoder::Model& model);

}  // namespace nidsgnn::classify
