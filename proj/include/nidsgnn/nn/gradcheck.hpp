#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "nidsgnn/nn/param.hpp"

namespace nidsgnn::nn {

// Central-difference gradient check. loss_fn must recompute the loss AND
// leave analytic gradients in each Param::grad (grads are zeroed before the
// analytic pass). Relative error per entry is |ad - fd| / max(1, |ad|, |fd|);
// the max over all entries is returned.
inline double finite_diff_check(const std::function<double()>& loss_fn,
                                ParamStore& params, double epsilon = 1e-5) {
    params.zero_grads();
    const double base = loss_fn();
    if (!std::isfinite(base))
        throw std::runtime_error("finite_diff_check: non-finite loss");

    // Snapshot analytic grads; loss_fn accumulated them just now.
    std::vector<Matrix> analytic;
    for (auto& p : params) analytic.push_back(p->grad);

    double max_rel = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Param& p = params[pi];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double orig = p.value.data[i];
            p.value.data[i] = orig + epsilon;
            params.zero_grads();
            const double up = loss_fn();
            p.value.data[i] = orig - epsilon;
            params.zero_grads();
            const double down = loss_fn();
            p.value.data[i] = orig;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::runtime_error("finite_diff_check: non-finite loss");
            const double fd = (up - down) / (2.0 * epsilon);
            const double ad = analytic[pi].data[i];
            const double rel =
                std::abs(ad - fd) / std::max({1.0, std::abs(ad), std::abs(fd)});
            max_rel = std::max(max_rel, rel);
        }
    }
    params.zero_grads();
    return max_rel;
}

}  // namespace nidsgnn::nn
