#pragma once

#include <cstdint>

#include "nidsgnn/dataio/records.hpp"

namespace nidsgnn::dataio {

// Reduces every class to the minority-class count by uniform sampling
// without replacement. Output preserves original row order.
RecordSet undersample_balance(const RecordSet& rs, const FeatureSchema& schema,
                              std::uint64_t seed);

// Balanced subsample of exactly n_labels rows: under-sample first, then draw
// per class; remainders go to the lowest class ids, so class counts stay
// within one of each other.
RecordSet fewshot_sample(const RecordSet& rs, const FeatureSchema& schema,
                         std::size_t n_labels, std::uint64_t seed);

}  // namespace nidsgnn::dataio
