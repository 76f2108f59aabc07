#pragma once

#include <cstdint>
#include <vector>

#include "nidsgnn/encoder/model.hpp"
#include "nidsgnn/flowgraph/graph.hpp"
#include "nidsgnn/nn/tape.hpp"

namespace nidsgnn::ssl {

struct PretrainConfig {
    std::size_t epochs = 300;
    std::size_t patience = 50;  // early stop after this many epochs w/o improvement
    double lr = 0.001;
    std::uint64_t seed = 0;     // drives the per-epoch corruption permutation
};

struct EpochLoss {
    std::size_t epoch;
    double loss;
};

// s = sum of edge embedding rows (plain sum readout).
nn::Value graph_summary(nn::Tape& t, nn::Value embeddings);

// sigmoid(h W_s s^T) for a single edge embedding row; plain-math evaluation
// used at inference/diagnostics time (the training loss stays in logit space).
double similarity(const nn::Matrix& h_row, const nn::Matrix& w_s,
                  const nn::Matrix& summary);

// Contrastive loss: original edges scored against the ORIGINAL graph's
// summary with target 1, corrupted edges against the same summary with
// target 0. Returns the two-term mean, so an uninformative discriminator
// (W_s = 0) sits at 2*ln 2.
nn::Value dgi_loss(nn::Tape& t, nn::Value h, nn::Value h_corrupt,
                   nn::Value summary, nn::Value w_s);

// Mean similarity over edges of one embedding matrix vs a summary row.
double mean_similarity(const nn::Matrix& embeddings, const nn::Matrix& w_s,
                       const nn::Matrix& summary);

// Full pre-training loop: per epoch a fresh corruption permutation, forward
// on both graphs, dgi_loss, backward, Adam on front-end + encoder + W_s.
std::vector<EpochLoss> pretrain(const flowgraph::FlowGraph& g,
                                encoder::Model& model, const PretrainConfig& cfg);

}  // namespace nidsgnn::ssl
