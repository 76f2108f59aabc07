#pragma once

// Independent reference implementations used as test oracles. Everything here
// is written with plain nested loops and std::vector math on purpose — it
// must not share code paths with the library being tested.

#include <cstdint>
#include <random>
#include <vector>

#include "nidsgnn/flowgraph/graph.hpp"
#include "nidsgnn/nn/matrix.hpp"

namespace oracle {

using nidsgnn::flowgraph::FlowGraph;
using nidsgnn::nn::Matrix;

// Builds a FlowGraph directly from an edge list (bypassing build_graph and
// its random source IPs) so tests control topology exactly.
inline FlowGraph make_graph(std::size_t node_count,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                            Matrix edge_features, std::size_t node_feat_width) {
    FlowGraph g;
    g.node_count = node_count;
    g.node_features = Matrix::ones(node_count, node_feat_width);
    g.edge_features = std::move(edge_features);
    g.incidence.resize(node_count);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [u, v] = edges[i];
        g.edges.push_back({u, v});
        g.incidence[u].emplace_back(v, std::uint32_t(i));
        if (v != u) g.incidence[v].emplace_back(u, std::uint32_t(i));
    }
    for (std::uint32_t u = 0; u < node_count; ++u)
        for (const auto& [v, e] : g.incidence[u]) {
            g.msg_center.push_back(u);
            g.msg_neighbor.push_back(v);
            g.msg_edge.push_back(e);
        }
    return g;
}

// Naive per-node message-passing reference: for each node u, messages
// W1 * [x_v; e_vu] over incident (v, edge) pairs, aggregated (mean or sum),
// update W2 * [x_u; a], ReLU on hidden layers, identity on the last.
// Returns |E| x 2*d_x rows [h_u; h_v].
inline Matrix naive_encode(const FlowGraph& g, const Matrix& edge_feats,
                           const std::vector<Matrix>& w1,
                           const std::vector<Matrix>& w2, bool mean) {
    const std::size_t layers = w1.size();
    Matrix states = g.node_features;
    for (std::size_t k = 0; k < layers; ++k) {
        const std::size_t d_in = states.cols;
        const std::size_t d_e = edge_feats.cols;
        const std::size_t d_x = w1[k].cols;
        Matrix next(g.node_count, d_x);
        for (std::size_t u = 0; u < g.node_count; ++u) {
            std::vector<double> agg(d_x, 0.0);
            std::size_t n_msgs = 0;
            for (const auto& e : g.edges) {
                // each undirected edge delivers one message to each endpoint
                for (int side = 0; side < 2; ++side) {
                    const std::uint32_t center = side == 0 ? e.u : e.v;
                    const std::uint32_t nb = side == 0 ? e.v : e.u;
                    if (center != u) continue;
                    if (e.u == e.v && side == 1) continue;  // self-loop: one message
                    const std::size_t ei = std::size_t(&e - g.edges.data());
                    for (std::size_t j = 0; j < d_x; ++j) {
                        double m = 0.0;
                        for (std::size_t p = 0; p < d_in; ++p)
                            m += states(nb, p) * w1[k](p, j);
                        for (std::size_t p = 0; p < d_e; ++p)
                            m += edge_feats(ei, p) * w1[k](d_in + p, j);
                        agg[j] += m;
                    }
                    ++n_msgs;
                }
            }
            if (mean && n_msgs > 0)
                for (double& x : agg) x /= double(n_msgs);
            for (std::size_t j = 0; j < d_x; ++j) {
                double s = 0.0;
                for (std::size_t p = 0; p < d_in; ++p) s += states(u, p) * w2[k](p, j);
                for (std::size_t p = 0; p < d_x; ++p) s += agg[p] * w2[k](d_in + p, j);
                next(u, j) = (k + 1 < layers && s < 0.0) ? 0.0 : s;
            }
        }
        states = std::move(next);
    }
    Matrix out(g.edge_count(), 2 * states.cols);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        for (std::size_t j = 0; j < states.cols; ++j) {
            out(i, j) = states(g.edges[i].u, j);
            out(i, states.cols + j) = states(g.edges[i].v, j);
        }
    }
    return out;
}

// Random multigraph: n nodes, m edges with uniformly random endpoints
// (self-loops excluded to keep message counting unambiguous).
inline FlowGraph random_graph(std::size_t n, std::size_t m, std::size_t d_e,
                              std::size_t node_feat_width, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> node(0, std::uint32_t(n - 1));
    std::uniform_real_distribution<double> feat(-1.5, 1.5);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t u = node(rng), v = node(rng);
        while (v == u) v = node(rng);
        edges.emplace_back(u, v);
    }
    Matrix ef(m, d_e);
    for (double& x : ef.data) x = feat(rng);
    return make_graph(n, edges, std::move(ef), node_feat_width);
}

}  // namespace oracle
