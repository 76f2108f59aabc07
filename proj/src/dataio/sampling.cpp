#include "nidsgnn/dataio/sampling.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace nidsgnn::dataio {

namespace {

std::map<std::uint32_t, std::vector<std::size_t>> rows_by_class(
    const RecordSet& rs, const FeatureSchema& schema) {
    std::map<std::uint32_t, std::vector<std::size_t>> by_class;
    for (std::size_t r = 0; r < rs.size(); ++r)
        by_class[rs.label_of(r, schema)].push_back(r);
    return by_class;
}

RecordSet take_rows(const RecordSet& rs, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    RecordSet out;
    out.columns = rs.columns;
    out.rows.reserve(idx.size());
    for (auto i : idx) out.rows.push_back(rs.rows[i]);
    return out;
}

std::vector<std::size_t> sample_without_replacement(
    const std::vector<std::size_t>& pool, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> p = pool;
    std::shuffle(p.begin(), p.end(), rng);
    p.resize(n);
    return p;
}

}  // namespace

RecordSet undersample_balance(const RecordSet& rs, const FeatureSchema& schema,
                              std::uint64_t seed) {
    auto by_class = rows_by_class(rs, schema);
    if (by_class.empty()) throw std::invalid_argument("undersample_balance: empty input");
    std::size_t min_count = SIZE_MAX;
    for (const auto& [c, rows] : by_class) min_count = std::min(min_count, rows.size());

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> keep;
    for (const auto& [c, rows] : by_class) {
        auto picked = sample_without_replacement(rows, min_count, rng);
        keep.insert(keep.end(), picked.begin(), picked.end());
    }
    return take_rows(rs, std::move(keep));
}

RecordSet fewshot_sample(const RecordSet& rs, const FeatureSchema& schema,
                         std::size_t n_labels, std::uint64_t seed) {
    if (n_labels > rs.size())
        throw std::invalid_argument("fewshot_sample: n_labels exceeds record count");
    auto by_class = rows_by_class(rs, schema);
    const std::size_t k = by_class.size();
    if (n_labels < k)
        throw std::invalid_argument("fewshot_sample: n_labels below class count");

    std::size_t min_count = SIZE_MAX;
    for (const auto& [c, rows] : by_class) min_count = std::min(min_count, rows.size());
    if (n_labels > min_count * k)
        throw std::invalid_argument(
            "fewshot_sample: n_labels exceeds balanced pool size (" +
            std::to_string(min_count * k) + ")");

    std::mt19937_64 rng(seed);
    const std::size_t base = n_labels / k;
    std::size_t rem = n_labels % k;
    std::vector<std::size_t> keep;
    for (const auto& [c, rows] : by_class) {
        // under-sample to the balanced pool, then draw the per-class share;
        // the remainder goes to the lowest class ids (map order).
        auto pool = sample_without_replacement(rows, min_count, rng);
        std::size_t want = base + (rem > 0 ? 1 : 0);
        if (rem > 0) --rem;
        pool.resize(want);
        keep.insert(keep.end(), pool.begin(), pool.end());
    }
    return take_rows(rs, std::move(keep));
}

}  // namespace nidsgnn::dataio
