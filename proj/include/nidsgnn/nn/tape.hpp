#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nidsgnn/nn/matrix.hpp"
#include "nidsgnn/nn/param.hpp"

namespace nidsgnn::nn {

// Handle to a value recorded on a Tape.
struct Value {
    std::uint32_t idx = UINT32_MAX;
    bool valid() const { return idx != UINT32_MAX; }
};

// Reverse-mode tape over the fixed op set the pipeline needs. Ops record a
// closure that propagates the output gradient to the inputs; backward()
// replays the tape in reverse creation order (creation order is already
// topological). Matrices produced by ops are treated as immutable.
class Tape {
public:
    // Leaves.
    Value input(Matrix m);                 // constant, no gradient tracked
    Value param(Param& p);                 // gradient flushed to p.grad on backward

    // Linear algebra.
    Value matmul(Value x, Value w);        // [n x p] * [p x q]
    Value transpose(Value x);
    Value add(Value a, Value b);           // same shape
    Value add_bias(Value x, Value bias);   // bias is 1 x cols, broadcast over rows
    Value scale(Value x, double alpha);

    // Elementwise activations.
    Value relu(Value x);
    Value sigmoid(Value x);

    // Structure ops.
    Value concat_cols(Value a, Value b);   // equal row counts
    Value slice_cols(Value x, std::size_t start, std::size_t width);
    Value concat_rows(Value a, Value b);   // equal col counts
    Value row_gather(Value x, std::vector<std::uint32_t> idx);
    // out[s] = sum or mean over rows r with seg[s] = s; segments with no
    // rows produce zero rows. seg values must be < n_segments.
    Value segment_reduce(Value x, std::vector<std::uint32_t> seg,
                         std::size_t n_segments, bool mean);
    Value col_sum(Value x);                // 1 x cols

    // Losses (1x1 outputs).
    Value bce_with_logits(Value logits, Matrix targets);
    Value softmax_ce(Value logits, std::vector<std::uint32_t> labels);

    const Matrix& value(Value v) const { return nodes_[v.idx].value; }
    const Matrix& grad(Value v) const { return nodes_[v.idx].grad; }
    double scalar(Value v) const;

    // Seeds d(loss)/d(loss) = 1 and propagates to all leaves, accumulating
    // into Param::grad. loss must be 1x1.
    void backward(Value loss);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        std::function<void(Tape&)> back;  // null for constants
    };

    Value push(Matrix value, std::function<void(Tape&)> back);
    Matrix& grad_mut(Value v) { return nodes_[v.idx].grad; }
    const Matrix& val(Value v) const { return nodes_[v.idx].value; }

    std::vector<Node> nodes_;
};

}  // namespace nidsgnn::nn
