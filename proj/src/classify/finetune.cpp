#include "nidsgnn/classify/finetune.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nidsgnn/nn/adam.hpp"
#include "nidsgnn/nn/tape.hpp"

namespace nidsgnn::classify {

std::vector<EpochLoss> finetune(const flowgraph::FlowGraph& g,
                                const std::vector<std::uint32_t>& labels,
                                encoder::Model& model, const FinetuneConfig& cfg) {
    if (labels.size() != g.edge_count())
        throw std::invalid_argument("finetune: labels not aligned to edges");
    for (auto l : labels)
        if (l >= model.cfg.n_classes)
            throw std::invalid_argument("finetune: label " + std::to_string(l) +
                                        " outside configured class count");

    nn::Adam opt(cfg.freeze_encoder ? model.head_only() : model.all_params(), cfg.lr);

    std::vector<EpochLoss> history;
    double best = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        nn::Tape t;
        nn::Value h = model.encode_graph(t, g);
        nn::Value logits = model.head_logits(t, h);
        nn::Value loss = t.softmax_ce(logits, labels);
        const double l = t.scalar(loss);
        if (!std::isfinite(l))
            throw std::runtime_error("finetune: non-finite loss at epoch " +
                                     std::to_string(epoch));
        history.push_back({epoch, l});
        t.backward(loss);
        opt.step();
        if (cfg.freeze_encoder) model.params.zero_grads();  // drop unused encoder grads
        if (l < best - 1e-12) {
            best = l;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    return history;
}

Prediction predict(const flowgraph::FlowGraph& g, encoder::Model& model) {
    nn::Tape t;
    nn::Value h = model.encode_graph(t, g);
    nn::Value logits = model.head_logits(t, h);
    const nn::Matrix& z = t.value(logits);

    Prediction out;
    out.probabilities = nn::Matrix(z.rows, z.cols);
    out.classes.resize(z.rows);
    for (std::size_t i = 0; i < z.rows; ++i) {
        double mx = z(i, 0);
        std::size_t arg = 0;
        for (std::size_t j = 1; j < z.cols; ++j)
            if (z(i, j) > mx) {
                mx = z(i, j);
                arg = j;
            }
        double denom = 0.0;
        for (std::size_t j = 0; j < z.cols; ++j) denom += std::exp(z(i, j) - mx);
        for (std::size_t j = 0; j < z.cols; ++j)
            out.probabilities(i, j) = std::exp(z(i, j) - mx) / denom;
        out.classes[i] = std::uint32_t(arg);
    }
    return out;
}

}  // namespace nidsgnn::classify
