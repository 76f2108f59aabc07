#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nidsgnn/nn/matrix.hpp"

namespace nidsgnn::nn {

// Trainable weight matrix with its gradient buffer.
struct Param {
    std::string name;
    Matrix value;
    Matrix grad;

    Param(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)),
          grad(value.rows, value.cols) {}

    void zero_grad() { grad.zero(); }
};

// Owning collection of uniquely named params. Iteration order is creation
// order, which the optimizer and checkpoint writer both rely on.
class ParamStore {
public:
    Param& add(std::string name, Matrix init) {
        for (const auto& p : params_)
            if (p->name == name)
                throw std::invalid_argument("duplicate param name: " + name);
        params_.push_back(std::make_unique<Param>(std::move(name), std::move(init)));
        return *params_.back();
    }

    Param& get(const std::string& name) {
        for (auto& p : params_)
            if (p->name == name) return *p;
        throw std::out_of_range("no param named " + name);
    }

    void zero_grads() {
        for (auto& p : params_) p->zero_grad();
    }

    std::size_t size() const { return params_.size(); }
    Param& operator[](std::size_t i) { return *params_[i]; }
    const Param& operator[](std::size_t i) const { return *params_[i]; }

    auto begin() { return params_.begin(); }
    auto end() { return params_.end(); }
    auto begin() const { return params_.begin(); }
    auto end() const { return params_.end(); }

private:
    std::vector<std::unique_ptr<Param>> params_;
};

}  // namespace nidsgnn::nn
