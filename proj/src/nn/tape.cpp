#include "nidsgnn/nn/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "nidsgnn/kern/kernels.hpp"

namespace nidsgnn::nn {

namespace {
const kern::Kernels& K() { return kern::active(); }

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}
}  // namespace

Value Tape::push(Matrix value, std::function<void(Tape&)> back) {
    Node n;
    n.grad = Matrix(value.rows, value.cols);
    n.value = std::move(value);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Value{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Value Tape::input(Matrix m) { return push(std::move(m), nullptr); }

Value Tape::param(Param& p) {
    Param* pp = &p;
    Value out = push(p.value, nullptr);
    nodes_[out.idx].back = [out, pp](Tape& t) {
        const Matrix& g = t.grad(out);
        K().axpy(g.size(), 1.0, g.data.data(), pp->grad.data.data());
    };
    return out;
}

Value Tape::matmul(Value x, Value w) {
    const Matrix& a = val(x);
    const Matrix& b = val(w);
    check_shapes_mul(a, b, "matmul");
    Matrix c(a.rows, b.cols);
    K().matmul_nn(a.data.data(), b.data.data(), c.data.data(), a.rows, b.cols, a.cols);
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x, w](Tape& t) {
        const Matrix& dy = t.grad(out);
        const Matrix& a = t.val(x);
        const Matrix& b = t.val(w);
        // dX += dY * W^T
        Matrix tmp(a.rows, a.cols);
        K().matmul_nt(dy.data.data(), b.data.data(), tmp.data.data(),
                      dy.rows, b.rows, dy.cols);
        K().axpy(tmp.size(), 1.0, tmp.data.data(), t.grad_mut(x).data.data());
        // dW += X^T * dY
        K().matmul_tn_acc(a.data.data(), dy.data.data(),
                          t.grad_mut(w).data.data(), a.cols, dy.cols, a.rows);
    };
    return out;
}

Value Tape::transpose(Value x) {
    const Matrix& a = val(x);
    Matrix c(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) c(j, i) = a(i, j);
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t i = 0; i < dy.rows; ++i)
            for (std::size_t j = 0; j < dy.cols; ++j) dx(j, i) += dy(i, j);
    };
    return out;
}

Value Tape::add(Value a, Value b) {
    const Matrix& x = val(a);
    const Matrix& y = val(b);
    if (!x.same_shape(y))
        throw std::invalid_argument("add: shape mismatch " + shape_str(x) +
                                    " vs " + shape_str(y));
    Matrix c = x;
    K().axpy(c.size(), 1.0, y.data.data(), c.data.data());
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, a, b](Tape& t) {
        const Matrix& dy = t.grad(out);
        K().axpy(dy.size(), 1.0, dy.data.data(), t.grad_mut(a).data.data());
        K().axpy(dy.size(), 1.0, dy.data.data(), t.grad_mut(b).data.data());
    };
    return out;
}

Value Tape::add_bias(Value x, Value bias) {
    const Matrix& a = val(x);
    const Matrix& b = val(bias);
    if (b.rows != 1 || b.cols != a.cols)
        throw std::invalid_argument("add_bias: bias must be 1x" +
                                    std::to_string(a.cols) + ", got " + shape_str(b));
    Matrix c = a;
    for (std::size_t i = 0; i < c.rows; ++i)
        K().axpy(c.cols, 1.0, b.data.data(), c.row(i));
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x, bias](Tape& t) {
        const Matrix& dy = t.grad(out);
        K().axpy(dy.size(), 1.0, dy.data.data(), t.grad_mut(x).data.data());
        Matrix& db = t.grad_mut(bias);
        for (std::size_t i = 0; i < dy.rows; ++i)
            K().axpy(dy.cols, 1.0, dy.row(i), db.data.data());
    };
    return out;
}

Value Tape::scale(Value x, double alpha) {
    const Matrix& a = val(x);
    Matrix c(a.rows, a.cols);
    K().scale(a.size(), alpha, a.data.data(), c.data.data());
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x, alpha](Tape& t) {
        const Matrix& dy = t.grad(out);
        K().axpy(dy.size(), alpha, dy.data.data(), t.grad_mut(x).data.data());
    };
    return out;
}

Value Tape::relu(Value x) {
    const Matrix& a = val(x);
    Matrix c(a.rows, a.cols);
    K().relu_fwd(a.size(), a.data.data(), c.data.data());
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x](Tape& t) {
        const Matrix& dy = t.grad(out);
        const Matrix& a = t.val(x);
        K().relu_bwd(a.size(), a.data.data(), dy.data.data(),
                     t.grad_mut(x).data.data());
    };
    return out;
}

Value Tape::sigmoid(Value x) {
    const Matrix& a = val(x);
    Matrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = stable_sigmoid(a.data[i]);
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x](Tape& t) {
        const Matrix& dy = t.grad(out);
        const Matrix& y = t.val(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t i = 0; i < dy.size(); ++i)
            dx.data[i] += dy.data[i] * y.data[i] * (1.0 - y.data[i]);
    };
    return out;
}

Value Tape::concat_cols(Value a, Value b) {
    const Matrix& x = val(a);
    const Matrix& y = val(b);
    if (x.rows != y.rows)
        throw std::invalid_argument("concat_cols: row mismatch " + shape_str(x) +
                                    " vs " + shape_str(y));
    Matrix c(x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        std::copy(x.row(i), x.row(i) + x.cols, c.row(i));
        std::copy(y.row(i), y.row(i) + y.cols, c.row(i) + x.cols);
    }
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, a, b](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& da = t.grad_mut(a);
        Matrix& db = t.grad_mut(b);
        for (std::size_t i = 0; i < dy.rows; ++i) {
            K().axpy(da.cols, 1.0, dy.row(i), da.row(i));
            K().axpy(db.cols, 1.0, dy.row(i) + da.cols, db.row(i));
        }
    };
    return out;
}

Value Tape::slice_cols(Value x, std::size_t start, std::size_t width) {
    const Matrix& a = val(x);
    if (start + width > a.cols)
        throw std::out_of_range("slice_cols: range exceeds " + shape_str(a));
    Matrix c(a.rows, width);
    for (std::size_t i = 0; i < a.rows; ++i)
        std::copy(a.row(i) + start, a.row(i) + start + width, c.row(i));
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x, start, width](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t i = 0; i < dy.rows; ++i)
            K().axpy(width, 1.0, dy.row(i), dx.row(i) + start);
    };
    return out;
}

Value Tape::concat_rows(Value a, Value b) {
    const Matrix& x = val(a);
    const Matrix& y = val(b);
    if (x.cols != y.cols)
        throw std::invalid_argument("concat_rows: col mismatch " + shape_str(x) +
                                    " vs " + shape_str(y));
    Matrix c(x.rows + y.rows, x.cols);
    std::copy(x.data.begin(), x.data.end(), c.data.begin());
    std::copy(y.data.begin(), y.data.end(), c.data.begin() + x.size());
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, a, b](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& da = t.grad_mut(a);
        Matrix& db = t.grad_mut(b);
        K().axpy(da.size(), 1.0, dy.data.data(), da.data.data());
        K().axpy(db.size(), 1.0, dy.data.data() + da.size(), db.data.data());
    };
    return out;
}

Value Tape::row_gather(Value x, std::vector<std::uint32_t> idx) {
    const Matrix& a = val(x);
    for (auto i : idx)
        if (i >= a.rows) throw std::out_of_range("row_gather: index out of range");
    Matrix c(idx.size(), a.cols);
    for (std::size_t r = 0; r < idx.size(); ++r)
        std::copy(a.row(idx[r]), a.row(idx[r]) + a.cols, c.row(r));
    Value out = push(std::move(c), nullptr);
    auto ix = std::make_shared<std::vector<std::uint32_t>>(std::move(idx));
    nodes_[out.idx].back = [out, x, ix](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t r = 0; r < ix->size(); ++r)
            K().axpy(dy.cols, 1.0, dy.row(r), dx.row((*ix)[r]));
    };
    return out;
}

Value Tape::segment_reduce(Value x, std::vector<std::uint32_t> seg,
                           std::size_t n_segments, bool mean) {
    const Matrix& a = val(x);
    if (seg.size() != a.rows)
        throw std::invalid_argument("segment_reduce: seg length != rows");
    auto counts = std::make_shared<std::vector<double>>(n_segments, 0.0);
    for (auto s : seg) {
        if (s >= n_segments) throw std::out_of_range("segment_reduce: bad segment id");
        (*counts)[s] += 1.0;
    }
    Matrix c(n_segments, a.cols);
    for (std::size_t r = 0; r < a.rows; ++r)
        K().axpy(a.cols, 1.0, a.row(r), c.row(seg[r]));
    if (mean)
        for (std::size_t s = 0; s < n_segments; ++s)
            if ((*counts)[s] > 0.0)
                K().scale(c.cols, 1.0 / (*counts)[s], c.row(s), c.row(s));
    Value out = push(std::move(c), nullptr);
    auto sg = std::make_shared<std::vector<std::uint32_t>>(std::move(seg));
    nodes_[out.idx].back = [out, x, sg, counts, mean](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t r = 0; r < sg->size(); ++r) {
            const std::uint32_t s = (*sg)[r];
            const double w = mean ? 1.0 / (*counts)[s] : 1.0;
            K().axpy(dy.cols, w, dy.row(s), dx.row(r));
        }
    };
    return out;
}

Value Tape::col_sum(Value x) {
    const Matrix& a = val(x);
    Matrix c(1, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        K().axpy(a.cols, 1.0, a.row(i), c.data.data());
    Value out = push(std::move(c), nullptr);
    nodes_[out.idx].back = [out, x](Tape& t) {
        const Matrix& dy = t.grad(out);
        Matrix& dx = t.grad_mut(x);
        for (std::size_t i = 0; i < dx.rows; ++i)
            K().axpy(dx.cols, 1.0, dy.data.data(), dx.row(i));
    };
    return out;
}

Value Tape::bce_with_logits(Value logits, Matrix targets) {
    const Matrix& z = val(logits);
    if (!z.same_shape(targets))
        throw std::invalid_argument("bce_with_logits: target shape mismatch");
    for (double t : targets.data)
        if (t != 0.0 && t != 1.0)
            throw std::invalid_argument("bce_with_logits: targets must be 0 or 1");
    const std::size_t n = z.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = z.data[i];
        const double ti = targets.data[i];
        // max(z,0) - z*t + log(1+exp(-|z|))
        acc += (zi > 0.0 ? zi : 0.0) - zi * ti + std::log1p(std::exp(-std::abs(zi)));
    }
    Matrix c(1, 1);
    c.data[0] = acc / double(n);
    Value out = push(std::move(c), nullptr);
    auto tg = std::make_shared<Matrix>(std::move(targets));
    nodes_[out.idx].back = [out, logits, tg](Tape& t) {
        const double dl = t.grad(out).data[0];
        const Matrix& z = t.val(logits);
        Matrix& dz = t.grad_mut(logits);
        const double invn = 1.0 / double(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            dz.data[i] += dl * invn * (stable_sigmoid(z.data[i]) - tg->data[i]);
    };
    return out;
}

Value Tape::softmax_ce(Value logits, std::vector<std::uint32_t> labels) {
    const Matrix& z = val(logits);
    if (labels.size() != z.rows)
        throw std::invalid_argument("softmax_ce: label count != rows");
    for (auto l : labels)
        if (l >= z.cols) throw std::out_of_range("softmax_ce: label out of range");
    auto probs = std::make_shared<Matrix>(z.rows, z.cols);
    double acc = 0.0;
    for (std::size_t i = 0; i < z.rows; ++i) {
        const double* zi = z.row(i);
        double mx = zi[0];
        for (std::size_t j = 1; j < z.cols; ++j) mx = std::max(mx, zi[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < z.cols; ++j) denom += std::exp(zi[j] - mx);
        const double logdenom = std::log(denom);
        for (std::size_t j = 0; j < z.cols; ++j)
            (*probs)(i, j) = std::exp(zi[j] - mx) / denom;
        acc += -(zi[labels[i]] - mx - logdenom);
    }
    Matrix c(1, 1);
    c.data[0] = acc / double(z.rows);
    Value out = push(std::move(c), nullptr);
    auto lb = std::make_shared<std::vector<std::uint32_t>>(std::move(labels));
    nodes_[out.idx].back = [out, logits, probs, lb](Tape& t) {
        const double dl = t.grad(out).data[0];
        Matrix& dz = t.grad_mut(logits);
        const double invn = 1.0 / double(dz.rows);
        for (std::size_t i = 0; i < dz.rows; ++i) {
            for (std::size_t j = 0; j < dz.cols; ++j)
                dz(i, j) += dl * invn * (*probs)(i, j);
            dz(i, (*lb)[i]) -= dl * invn;
        }
    };
    return out;
}

double Tape::scalar(Value v) const {
    const Matrix& m = value(v);
    if (m.rows != 1 || m.cols != 1)
        throw std::invalid_argument("scalar: value is " + shape_str(m));
    return m.data[0];
}

void Tape::backward(Value loss) {
    const Matrix& m = value(loss);
    if (m.rows != 1 || m.cols != 1)
        throw std::invalid_argument("backward: loss must be 1x1");
    nodes_[loss.idx].grad.data[0] = 1.0;
    for (std::size_t i = loss.idx + 1; i-- > 0;)
        if (nodes_[i].back) nodes_[i].back(*this);
}

}  // namespace nidsgnn::nn
