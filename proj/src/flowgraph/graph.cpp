#include "nidsgnn/flowgraph/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nidsgnn::flowgraph {

std::vector<std::pair<NodeId, EdgeId>> FlowGraph::neighbors(NodeId u) const {
    if (u >= node_count) throw std::out_of_range("neighbors: invalid node id");
    return incidence[u];
}

namespace {

void build_msg_lists(FlowGraph& g) {
    g.msg_center.clear();
    g.msg_neighbor.clear();
    g.msg_edge.clear();
    g.msg_center.reserve(2 * g.edge_count());
    for (NodeId u = 0; u < g.node_count; ++u)
        for (const auto& [v, e] : g.incidence[u]) {
            g.msg_center.push_back(u);
            g.msg_neighbor.push_back(v);
            g.msg_edge.push_back(e);
        }
}

}  // namespace

FlowGraph build_graph(const dataio::EncodedDataset& ds, std::uint64_t seed,
                      std::size_t node_feat_width) {
    if (ds.dst_ip.size() != ds.size() || ds.dst_port.size() != ds.size())
        throw std::invalid_argument("build_graph: dataset lacks endpoint columns");

    FlowGraph g;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> ip_dist(0u, 0xffffffffu);

    auto node_for = [&](const std::string& key) -> NodeId {
        auto [it, fresh] = g.endpoint_index.try_emplace(key, NodeId(g.node_count));
        if (fresh) {
            ++g.node_count;
            g.incidence.emplace_back();
        }
        return it->second;
    };

    g.edges.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        // fresh random IPv4 per flow; collisions merge nodes
        const std::uint32_t ip = ip_dist(rng);
        const NodeId u = node_for("S:" + std::to_string(ip));
        const NodeId v = node_for("D:" + ds.dst_ip[i] + ":" + ds.dst_port[i]);
        const EdgeId e = EdgeId(g.edges.size());
        g.edges.push_back({u, v});
        g.incidence[u].emplace_back(v, e);
        if (v != u) g.incidence[v].emplace_back(u, e);
    }

    g.edge_features = ds.features;
    g.node_features = nn::Matrix::ones(g.node_count, node_feat_width);
    g.labels = ds.labels;
    build_msg_lists(g);
    return g;
}

FlowGraph corrupt(const FlowGraph& g, std::uint64_t seed) {
    if (g.edge_count() < 2)
        throw std::invalid_argument("corrupt: need at least 2 edges");
    FlowGraph c = g;
    std::vector<std::uint32_t> perm(g.edge_count());
    std::iota(perm.begin(), perm.end(), 0u);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i)
        std::copy(g.edge_features.row(perm[i]),
                  g.edge_features.row(perm[i]) + g.edge_features.cols,
                  c.edge_features.row(i));
    return c;
}

}  // namespace nidsgnn::flowgraph
