#include "nidsgnn/ssl/dgi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nidsgnn/nn/adam.hpp"

namespace nidsgnn::ssl {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t epoch) {
    // splitmix64 step over (seed, epoch)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (epoch + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

nn::Value graph_summary(nn::Tape& t, nn::Value embeddings) {
    if (t.value(embeddings).rows == 0)
        throw std::invalid_argument("graph_summary: empty edge set");
    return t.col_sum(embeddings);
}

double similarity(const nn::Matrix& h_row, const nn::Matrix& w_s,
                  const nn::Matrix& summary) {
    const std::size_t d = w_s.rows;
    if (h_row.size() != d || summary.size() != d || w_s.cols != d)
        throw std::invalid_argument("similarity: width mismatch");
    double logit = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += w_s(i, j) * summary.data[j];
        logit += h_row.data[i] * acc;
    }
    return sigmoid(logit);
}

double mean_similarity(const nn::Matrix& embeddings, const nn::Matrix& w_s,
                       const nn::Matrix& summary) {
    double acc = 0.0;
    nn::Matrix row(1, embeddings.cols);
    for (std::size_t e = 0; e < embeddings.rows; ++e) {
        std::copy(embeddings.row(e), embeddings.row(e) + embeddings.cols,
                  row.data.begin());
        acc += similarity(row, w_s, summary);
    }
    return acc / double(embeddings.rows);
}

nn::Value dgi_loss(nn::Tape& t, nn::Value h, nn::Value h_corrupt,
                   nn::Value summary, nn::Value w_s) {
    const std::size_t n = t.value(h).rows;
    if (t.value(h_corrupt).rows != n)
        throw std::invalid_argument("dgi_loss: edge count mismatch");
    nn::Value st = t.transpose(summary);
    nn::Value pos = t.matmul(t.matmul(h, w_s), st);
    nn::Value neg = t.matmul(t.matmul(h_corrupt, w_s), st);
    nn::Matrix targets(2 * n, 1);
    for (std::size_t i = 0; i < n; ++i) targets.data[i] = 1.0;
    // Eq-style two-term sum over |E| edges == 2x the BCE mean over 2|E| rows
    return t.scale(t.bce_with_logits(t.concat_rows(pos, neg), std::move(targets)), 2.0);
}

std::vector<EpochLoss> pretrain(const flowgraph::FlowGraph& g,
                                encoder::Model& model, const PretrainConfig& cfg) {
    std::vector<nn::Param*> train_params;
    for (nn::Param* p : model.all_params())
        if (p != model.w_head && p != model.b_head) train_params.push_back(p);
    nn::Adam opt(train_params, cfg.lr);

    std::vector<EpochLoss> history;
    double best = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        flowgraph::FlowGraph gc = flowgraph::corrupt(g, mix_seed(cfg.seed, epoch));
        nn::Tape t;
        nn::Value h = model.encode_graph(t, g);
        nn::Value hc = model.encode_graph(t, gc);
        nn::Value s = graph_summary(t, h);
        nn::Value loss = dgi_loss(t, h, hc, s, t.param(*model.w_s));
        const double l = t.scalar(loss);
        if (!std::isfinite(l))
            throw std::runtime_error("pretrain: non-finite loss at epoch " +
                                     std::to_string(epoch));
        history.push_back({epoch, l});
        t.backward(loss);
        opt.step();
        if (l < best - 1e-12) {
            best = l;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    return history;
}

}  // namespace nidsgnn::ssl
