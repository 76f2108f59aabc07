#pragma once

#include <cstdint>
#include <string>

#include "nidsgnn/dataio/records.hpp"

namespace nidsgnn::dataio {

// Desk-scale labeled flow generator, schema-compatible with NetFlow-style
// CSV exports. Attack flows of each class concentrate on a handful of
// destination endpoints so that graph context carries signal beyond the
// per-flow features; `separation` in [0,1] scales how far apart the
// per-class numeric distributions sit (1 = disjoint ranges).
struct SyntheticConfig {
    std::size_t n_flows = 10000;
    std::size_t n_hosts = 50;
    double attack_rate = 0.3;
    std::size_t n_attack_classes = 3;
    std::size_t attack_dst_per_class = 3;
    double separation = 0.35;
    std::uint64_t seed = 1;
};

RecordSet gen_synthetic(const SyntheticConfig& cfg);

// Schema matching gen_synthetic's columns.
FeatureSchema synthetic_schema();

// Newline-delimited allowlist of the benign domains gen_synthetic emits.
std::string synthetic_allowlist_text();

}  // namespace nidsgnn::dataio
