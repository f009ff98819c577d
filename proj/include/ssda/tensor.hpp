#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ssda/errors.hpp"

namespace ssda {

using Shape = std::vector<int>;

std::int64_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

class GradTape;

namespace detail {

struct OpRecord;

struct TensorNode {
    Shape shape;
    std::vector<double> data;
    std::vector<double> grad;      // empty until first accumulation
    bool requires_grad = false;
    OpRecord* producer = nullptr;  // non-owning; set while the recording tape is alive

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    }
};

struct OpRecord {
    const char* name;
    std::vector<std::shared_ptr<TensorNode>> inputs;
    std::shared_ptr<TensorNode> out;
    std::function<void(OpRecord&)> backprop;
};

}  // namespace detail

/// Dense row-major tensor of 64-bit floats. A Tensor is a cheap handle:
/// copies alias the same storage. Operations executed inside a GradTape
/// scope on tensors with requires_grad build a reverse-mode graph.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape);
    static Tensor full(Shape shape, double value);
    static Tensor scalar(double value);
    static Tensor from(Shape shape, std::vector<double> values);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const;
    std::int64_t size() const;
    bool is_scalar() const { return size() == 1; }

    std::span<const double> data() const;
    std::span<double> mutable_data();  // in-place edits; only sensible on leaves
    double value() const;              // scalar fetch

    bool requires_grad() const;
    Tensor& set_requires_grad(bool on);  // leaves only

    /// Gradient accumulated by backward(); empty span if never touched.
    std::span<const double> grad() const;
    bool has_grad() const;
    void zero_grad();  // allocates (if needed) and clears the gradient buffer

    std::shared_ptr<detail::TensorNode> node() const { return node_; }

private:
    explicit Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}
    std::shared_ptr<detail::TensorNode> node_;

    friend Tensor make_tensor(Shape, std::vector<double>);
    friend class GradTape;
};

/// Records operations for reverse-mode differentiation. Constructing a tape
/// makes it the active tape for the current thread; destruction restores the
/// previous one. A tape plus the tensors recorded on it form one run context:
/// not safe for concurrent mutation, safe to use whole from a single thread.
class GradTape {
public:
    GradTape();
    ~GradTape();
    GradTape(const GradTape&) = delete;
    GradTape& operator=(const GradTape&) = delete;

    /// Accumulates d(loss)/d(leaf) into every reachable requires_grad leaf.
    /// Repeated calls accumulate additively; intermediate node gradients are
    /// rebuilt per call. Throws ValueError unless loss is scalar.
    void backward(const Tensor& loss);

    void clear();  // drops all records, detaching recorded outputs
    std::size_t size() const { return records_.size(); }

    static GradTape* current();

private:
    std::vector<std::unique_ptr<detail::OpRecord>> records_;
    GradTape* prev_ = nullptr;

    friend void record_op(const char*, std::vector<Tensor>, Tensor&,
                          std::function<void(detail::OpRecord&)>);
};

/// Disables gradient recording for the current thread while alive.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool prev_;
};

bool grad_recording_enabled();

/// When strict numerics is on, every operation validates its output for
/// non-finite values and throws NumericError naming the operation.
void set_strict_numerics(bool on);
bool strict_numerics();

// ---- elementwise ----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor neg(const Tensor& a);
Tensor exp(const Tensor& a);
/// Natural log; inputs are clamped to [1e-12, inf) so probabilities that
/// underflow do not produce -inf. Gradient is zero in the clamped region.
Tensor log(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor mul_scalar(const Tensor& a, double c);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator/(const Tensor& a, const Tensor& b) { return div(a, b); }
inline Tensor operator-(const Tensor& a) { return neg(a); }
inline Tensor operator*(double c, const Tensor& a) { return mul_scalar(a, c); }
inline Tensor operator*(const Tensor& a, double c) { return mul_scalar(a, c); }

// ---- linear algebra ----
Tensor matmul(const Tensor& a, const Tensor& b);            // [m,k] x [k,n]
Tensor add_row_bias(const Tensor& x, const Tensor& bias);   // [n,k] + [k]
Tensor add_channel_bias(const Tensor& x, const Tensor& b);  // [n,c,h,w] + [c]

// ---- convolution & pooling ----
/// Direct 2-D cross-correlation. x is [c_in,h,w] or [n,c_in,h,w]; kernels are
/// [c_out,c_in,kh,kw]. Output rank mirrors the input rank.
Tensor conv2d(const Tensor& x, const Tensor& kernels, int stride, int padding);
Tensor maxpool2(const Tensor& x);  // 2x2 window, stride 2, floor semantics

// ---- shape ----
Tensor reshape(const Tensor& x, Shape new_shape);
Tensor flatten_rows(const Tensor& x);  // [n,...] -> [n, rest]
Tensor slice_rows(const Tensor& x, int row_begin, int row_end);  // 2-D

// ---- reductions & indexing ----
Tensor sum(const Tensor& x);   // -> scalar
Tensor mean(const Tensor& x);  // -> scalar
/// out[i] = x[i, index[i]] for a [n,k] input.
Tensor rows_gather(const Tensor& x, const std::vector<int>& index);

// ---- softmax ----
/// Row-wise log-softmax for [n,k] inputs, stabilized by the row max.
Tensor log_softmax(const Tensor& logits);

/// Value copy of x that is detached from the graph: requires_grad false,
/// no producer, so nothing behind it ever receives gradient.
Tensor stop_gradient(const Tensor& x);

}  // namespace ssda
