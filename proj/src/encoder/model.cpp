#include "nidsgnn/encoder/model.hpp"

#include <random>
#include <sstream>

namespace nidsgnn::encoder {

std::string ModelConfig::digest_text() const {
    std::ostringstream os;
    os << "mode=" << (mode == FrontEndMode::dense ? "dense" : "target")
       << ";num=" << numeric_width << ";cat=" << categorical_width
       << ";d_emb=" << d_emb << ";d_e=" << d_e << ";K=" << layers
       << ";d_x=" << d_x << ";node=" << node_feat_width
       << ";agg=" << (aggregator == Aggregator::mean ? "mean" : "sum")
       << ";classes=" << n_classes;
    return os.str();
}

std::uint64_t ModelConfig::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : digest_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

EmbedFrontEnd::EmbedFrontEnd(const ModelConfig& cfg, nn::ParamStore& store,
                             std::mt19937_64& rng)
    : cfg_(cfg) {
    if (cfg.mode == FrontEndMode::target) return;
    if (cfg.numeric_width + cfg.categorical_width == 0)
        throw std::invalid_argument("front-end: no input features");
    std::size_t blocks = 0;
    if (cfg.numeric_width > 0) {
        w_num_ = &store.add("W_num",
                            nn::Matrix::glorot(cfg.numeric_width, cfg.d_emb, rng));
        ++blocks;
    }
    if (cfg.categorical_width > 0) {
        w_cat_ = &store.add("W_cat",
                            nn::Matrix::glorot(cfg.categorical_width, cfg.d_emb, rng));
        ++blocks;
    }
    w_mix_ = &store.add("W_mix", nn::Matrix::glorot(blocks * cfg.d_emb, cfg.d_e, rng));
}

nn::Value EmbedFrontEnd::embed(nn::Tape& t, nn::Value raw) const {
    const nn::Matrix& r = t.value(raw);
    if (r.cols != cfg_.numeric_width + cfg_.categorical_width)
        throw std::invalid_argument("embed: raw width " + std::to_string(r.cols) +
                                    " does not match front-end");
    if (cfg_.mode == FrontEndMode::target) return raw;

    std::vector<nn::Value> blocks;
    if (cfg_.numeric_width > 0) {
        nn::Value xnum = t.slice_cols(raw, 0, cfg_.numeric_width);
        blocks.push_back(t.matmul(xnum, t.param(*w_num_)));
    }
    if (cfg_.categorical_width > 0) {
        nn::Value xcat = t.slice_cols(raw, cfg_.numeric_width, cfg_.categorical_width);
        blocks.push_back(t.matmul(xcat, t.param(*w_cat_)));
    }
    nn::Value h = blocks.size() == 2 ? t.concat_cols(blocks[0], blocks[1]) : blocks[0];
    return t.matmul(h, t.param(*w_mix_));
}

EGraphSage::EGraphSage(const ModelConfig& cfg, nn::ParamStore& store,
                       std::mt19937_64& rng)
    : cfg_(cfg) {
    if (cfg.layers < 1) throw std::invalid_argument("encoder: need at least 1 layer");
    const std::size_t d_e = cfg.edge_feature_width();
    std::size_t d_in = cfg.node_feat_width;
    for (std::size_t k = 0; k < cfg.layers; ++k) {
        w1_.push_back(&store.add("W1_" + std::to_string(k + 1),
                                 nn::Matrix::glorot(d_in + d_e, cfg.d_x, rng)));
        w2_.push_back(&store.add("W2_" + std::to_string(k + 1),
                                 nn::Matrix::glorot(d_in + cfg.d_x, cfg.d_x, rng)));
        d_in = cfg.d_x;
    }
}

nn::Value EGraphSage::encode(nn::Tape& t, const flowgraph::FlowGraph& g,
                             nn::Value edge_feats) const {
    nn::Value states = t.input(g.node_features);
    const bool mean = cfg_.aggregator == Aggregator::mean;
    for (std::size_t k = 0; k < cfg_.layers; ++k) {
        nn::Value nb = t.row_gather(states, g.msg_neighbor);
        nn::Value ef = t.row_gather(edge_feats, g.msg_edge);
        nn::Value msgs = t.matmul(t.concat_cols(nb, ef), t.param(*w1_[k]));
        nn::Value agg = t.segment_reduce(msgs, g.msg_center, g.node_count, mean);
        nn::Value next = t.matmul(t.concat_cols(states, agg), t.param(*w2_[k]));
        states = (k + 1 < cfg_.layers) ? t.relu(next) : next;
    }
    std::vector<std::uint32_t> us, vs;
    us.reserve(g.edge_count());
    vs.reserve(g.edge_count());
    for (const auto& e : g.edges) {
        us.push_back(e.u);
        vs.push_back(e.v);
    }
    return t.concat_cols(t.row_gather(states, std::move(us)),
                         t.row_gather(states, std::move(vs)));
}

Model::Model(const ModelConfig& c, std::uint64_t seed) : cfg(c) {
    std::mt19937_64 rng(seed);
    frontend = std::make_unique<EmbedFrontEnd>(cfg, params, rng);
    enc = std::make_unique<EGraphSage>(cfg, params, rng);
    const std::size_t w = cfg.embedding_width();
    w_s = &params.add("W_s", nn::Matrix::glorot(w, w, rng));
    w_head = &params.add("W_head", nn::Matrix::glorot(w, cfg.n_classes, rng));
    b_head = &params.add("b_head", nn::Matrix(1, cfg.n_classes));
}

nn::Value Model::encode_graph(nn::Tape& t, const flowgraph::FlowGraph& g) const {
    nn::Value raw = t.input(g.edge_features);
    nn::Value ef = frontend->embed(t, raw);
    return enc->encode(t, g, ef);
}

nn::Value Model::head_logits(nn::Tape& t, nn::Value embeddings) const {
    return t.add_bias(t.matmul(embeddings, t.param(*w_head)), t.param(*b_head));
}

std::vector<nn::Param*> Model::all_params() {
    std::vector<nn::Param*> out;
    for (auto& p : params) out.push_back(p.get());
    return out;
}

std::vector<nn::Param*> Model::head_only() { return {w_head, b_head}; }

}  // namespace nidsgnn::encoder
