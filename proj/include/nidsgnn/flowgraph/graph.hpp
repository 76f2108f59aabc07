#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nidsgnn/dataio/preprocess.hpp"
#include "nidsgnn/nn/matrix.hpp"

namespace nidsgnn::flowgraph {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Undirected multigraph of flow endpoints. One edge per flow; each edge
// carries the flow's encoded feature row. Node features are constant ones.
struct FlowGraph {
    struct Edge {
        NodeId u, v;
    };

    std::size_t node_count = 0;
    nn::Matrix node_features;  // node_count x node_feat_width, all 1.0
    std::vector<Edge> edges;   // edge i carries edge_features row i
    nn::Matrix edge_features;  // |E| x d_e
    // per node: (neighbor, edge id); each edge appears at both endpoints
    std::vector<std::vector<std::pair<NodeId, EdgeId>>> incidence;
    std::unordered_map<std::string, NodeId> endpoint_index;
    std::vector<std::uint32_t> labels;  // per edge, empty when unlabeled

    // Flattened incidence for message passing, grouped by center node:
    // row r is a message delivered to msg_center[r] from msg_neighbor[r]
    // along edge msg_edge[r]. Length 2|E|.
    std::vector<std::uint32_t> msg_center, msg_neighbor, msg_edge;

    std::size_t edge_count() const { return edges.size(); }

    std::vector<std::pair<NodeId, EdgeId>> neighbors(NodeId u) const;
};

// Builds the graph from encoded flows. Source endpoints get fresh uniformly
// random IPv4 addresses (seeded; collisions merge); destinations are keyed
// by (ip, port) and shared across flows.
FlowGraph build_graph(const dataio::EncodedDataset& ds, std::uint64_t seed,
                      std::size_t node_feat_width = 64);

// Identical topology and node features; edge feature rows permuted by a
// fresh uniform permutation. Requires at least 2 edges.
FlowGraph corrupt(const FlowGraph& g, std::uint64_t seed);

}  // namespace nidsgnn::flowgraph
