#pragma once

#include <cmath>
#include <vector>

#include "nidsgnn/kern/kernels.hpp"
#include "nidsgnn/nn/param.hpp"

namespace nidsgnn::nn {

// Adam with bias correction over an explicit param list (a subset of a
// ParamStore when some weights are frozen). Grads of the listed params are
// zeroed after each step.
class Adam {
public:
    explicit Adam(std::vector<Param*> params, double lr = 0.001,
                  double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
          eps_(eps) {
        for (Param* p : params_) {
            m_.emplace_back(p->value.rows, p->value.cols);
            v_.emplace_back(p->value.rows, p->value.cols);
        }
    }

    void step() {
        ++step_;
        const double bc1 = 1.0 - std::pow(beta1_, double(step_));
        const double bc2 = 1.0 - std::pow(beta2_, double(step_));
        // bias corrections folded into the step size:
        //   w -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
        //      = lr*sqrt(bc2)/bc1 * m / (sqrt(v) + eps*sqrt(bc2))
        const double step_size = lr_ * std::sqrt(bc2) / bc1;
        const double eps_hat = eps_ * std::sqrt(bc2);
        const auto& k = kern::active();
        for (std::size_t i = 0; i < params_.size(); ++i) {
            Param& p = *params_[i];
            k.adam_update(p.value.size(), p.value.data.data(), p.grad.data.data(),
                          m_[i].data.data(), v_[i].data.data(), beta1_, beta2_,
                          step_size, eps_hat);
            p.zero_grad();
        }
    }

    std::uint64_t step_count() const { return step_; }
    double lr() const { return lr_; }

private:
    std::vector<Param*> params_;
    double lr_, beta1_, beta2_, eps_;
    std::uint64_t step_ = 0;
    std::vector<Matrix> m_, v_;
};

}  // namespace nidsgnn::nn
