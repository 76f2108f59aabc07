#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nidsgnn/flowgraph/graph.hpp"
#include "nidsgnn/nn/param.hpp"
#include "nidsgnn/nn/tape.hpp"

namespace nidsgnn::encoder {

enum class FrontEndMode { dense, target };
enum class Aggregator { mean, sum };

struct ModelConfig {
    FrontEndMode mode = FrontEndMode::dense;
    std::size_t numeric_width = 0;      // raw numeric block width
    std::size_t categorical_width = 0;  // raw categorical block width
    std::size_t d_emb = 64;             // per-block dense embedding width
    std::size_t d_e = 64;               // mixed edge-feature width (dense mode)
    std::size_t layers = 2;
    std::size_t d_x = 128;
    std::size_t node_feat_width = 64;
    Aggregator aggregator = Aggregator::mean;
    std::size_t n_classes = 2;

    std::size_t edge_feature_width() const {
        return mode == FrontEndMode::dense ? d_e : numeric_width + categorical_width;
    }
    std::size_t embedding_width() const { return 2 * d_x; }
    std::string digest_text() const;
    std::uint64_t digest() const;
};

// Feature front-end: dense mode learns W_num / W_cat / W_mix, target mode is
// a parameter-free pass-through of the scalar-encoded features.
class EmbedFrontEnd {
public:
    EmbedFrontEnd(const ModelConfig& cfg, nn::ParamStore& store, std::mt19937_64& rng);

    // raw: |E| x (numeric_width + categorical_width)
    nn::Value embed(nn::Tape& t, nn::Value raw) const;
    FrontEndMode mode() const { return cfg_.mode; }

private:
    ModelConfig cfg_;
    nn::Param* w_num_ = nullptr;
    nn::Param* w_cat_ = nullptr;
    nn::Param* w_mix_ = nullptr;
};

// K-layer E-GraphSAGE. Messages concatenate neighbor state with the edge's
// feature vector; the update concatenates the center state with the
// aggregate. Hidden layers use ReLU, the final layer is linear.
class EGraphSage {
public:
    EGraphSage(const ModelConfig& cfg, nn::ParamStore& store, std::mt19937_64& rng);

    // edge_feats: |E| x edge_feature_width, reused at every layer.
    // Returns |E| x 2*d_x edge embeddings [h_u; h_v] in stored orientation.
    nn::Value encode(nn::Tape& t, const flowgraph::FlowGraph& g,
                     nn::Value edge_feats) const;

private:
    ModelConfig cfg_;
    std::vector<nn::Param*> w1_, w2_;
};

// Bundle of everything trainable plus the configs, built with a single seed.
struct Model {
    ModelConfig cfg;
    nn::ParamStore params;
    std::unique_ptr<EmbedFrontEnd> frontend;
    std::unique_ptr<EGraphSage> enc;
    nn::Param* w_s = nullptr;     // DGI discriminator
    nn::Param* w_head = nullptr;  // classification head
    nn::Param* b_head = nullptr;

    Model(const ModelConfig& c, std::uint64_t seed);
    Model(const Model&) = delete;

    // embed + encode in one go
    nn::Value encode_graph(nn::Tape& t, const flowgraph::FlowGraph& g) const;
    // logits for the classification head, |E| x n_classes
    nn::Value head_logits(nn::Tape& t, nn::Value embeddings) const;

    std::vector<nn::Param*> all_params();
    std::vector<nn::Param*> head_only();
};

}  // namespace nidsgnn::encoder
