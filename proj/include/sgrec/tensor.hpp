#ifndef SGREC_TENSOR_HPP
#define SGREC_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sgrec/common.hpp"

namespace sgrec {

// Dense row-major tensor recorded on a gradient tape. Instantiated with
// double for gradient checks and float for fast training runs.
template <typename Real>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<Real> value;
  std::vector<Real> grad;  // empty until gradient flows into this tensor
  bool requires_grad = false;
  std::uint64_t tape_serial = 0;  // 0 = leaf (not produced by an op)

  Tensor() = default;
  Tensor(std::vector<std::size_t> s, std::vector<Real> v, bool rg = false)
      : shape(std::move(s)), value(std::move(v)), requires_grad(rg) {}

  std::size_t numel() const { return value.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  Real& at(std::size_t i) { return value[i]; }
  Real at(std::size_t i) const { return value[i]; }
  Real& at(std::size_t r, std::size_t c) { return value[r * cols() + c]; }
  Real at(std::size_t r, std::size_t c) const { return value[r * cols() + c]; }

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), Real(0));
  }
  void zero_grad() { grad.clear(); }
};

template <typename Real>
using TensorPtr = std::shared_ptr<Tensor<Real>>;

inline std::string shape_str(const std::vector<std::size_t>& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "x" : "") << s[i];
  os << "]";
  return os.str();
}

template <typename Real>
std::size_t shape_numel(const std::vector<std::size_t>& s) {
  std::size_t n = 1;
  for (auto d : s) n *= d;
  return n;
}

template <typename Real>
TensorPtr<Real> make_tensor(std::vector<std::size_t> shape,
                            std::vector<Real> data, bool requires_grad = false) {
  std::size_t n = 1;
  for (auto d : shape) {
    if (d == 0) throw ShapeError("tensor dimension must be positive, got " + shape_str(shape));
    n *= d;
  }
  if (n != data.size())
    throw ShapeError("data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_str(shape));
  return std::make_shared<Tensor<Real>>(std::move(shape), std::move(data), requires_grad);
}

template <typename Real>
TensorPtr<Real> zeros(std::vector<std::size_t> shape, bool requires_grad = false) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return make_tensor<Real>(std::move(shape), std::vector<Real>(n, Real(0)), requires_grad);
}

template <typename Real>
TensorPtr<Real> scalar(Real v, bool requires_grad = false) {
  return make_tensor<Real>({1}, {v}, requires_grad);
}

// Records the backward rules of every operation executed while active.
// Nodes are appended in execution order, which is a topological order of
// the computation graph, so the backward pass is a single reverse sweep.
template <typename Real>
class Tape {
 public:
  Tape() : serial_(next_serial()) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::uint64_t serial() const { return serial_; }
  bool recording() const { return recording_; }
  void set_recording(bool on) { recording_ = on; }
  std::size_t size() const { return nodes_.size(); }

  void record(std::function<void()> fn) { nodes_.push_back(std::move(fn)); }

  void backward_from(const TensorPtr<Real>& loss) {
    if (loss->numel() != 1)
      throw ValueError("backward requires a scalar loss, got shape " + shape_str(loss->shape));
    if (loss->tape_serial != serial_)
      throw ValueError("loss tensor was not produced on this tape");
    loss->ensure_grad();
    loss->grad[0] = Real(1);
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
  }

  void clear() {
    nodes_.clear();
    serial_ = next_serial();
  }

 private:
  static std::uint64_t next_serial() {
    static std::uint64_t counter = 0;
    return ++counter;
  }
  std::vector<std::function<void()>> nodes_;
  bool recording_ = true;
  std::uint64_t serial_;
};

template <typename Real>
void backward(const TensorPtr<Real>& loss, Tape<Real>& tape) {
  tape.backward_from(loss);
}

namespace detail {

template <typename Real>
TensorPtr<Real> op_output(Tape<Real>& tape, std::vector<std::size_t> shape,
                          std::vector<Real> data, bool requires_grad) {
  auto out = make_tensor<Real>(std::move(shape), std::move(data), requires_grad);
  out->tape_serial = tape.serial();
  return out;
}

// True when a backward rule has gradient to propagate from `out`.
template <typename Real>
bool has_flow(const TensorPtr<Real>& out) {
  return !out->grad.empty();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Recorded primitives
// ---------------------------------------------------------------------------

template <typename Real>
TensorPtr<Real> matmul(Tape<Real>& tape, const TensorPtr<Real>& a,
                       const TensorPtr<Real>& b) {
  if (a->shape.size() != 2 || b->shape.size() != 2 || a->shape[1] != b->shape[0])
    throw ShapeError("matmul shape mismatch: " + shape_str(a->shape) + " vs " +
                     shape_str(b->shape));
  const std::size_t m = a->shape[0], k = a->shape[1], n = b->shape[1];
  std::vector<Real> out(m * n, Real(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t kk = 0; kk < k; ++kk) {
      const Real av = a->value[i * k + kk];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += av * b->value[kk * n + j];
    }
  bool rg = a->requires_grad || b->requires_grad;
  auto res = detail::op_output(tape, {m, n}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([a, b, res, m, k, n] {
      if (!detail::has_flow(res)) return;
      const auto& g = res->grad;
      if (a->requires_grad) {
        a->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t kk = 0; kk < k; ++kk) {
            Real acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * b->value[kk * n + j];
            a->grad[i * k + kk] += acc;
          }
      }
      if (b->requires_grad) {
        b->ensure_grad();
        for (std::size_t kk = 0; kk < k; ++kk)
          for (std::size_t j = 0; j < n; ++j) {
            Real acc = 0;
            for (std::size_t i = 0; i < m; ++i) acc += a->value[i * k + kk] * g[i * n + j];
            b->grad[kk * n + j] += acc;
          }
      }
    });
  }
  return res;
}

// W[m x n] * x[n] -> y[m]
template <typename Real>
TensorPtr<Real> matvec(Tape<Real>& tape, const TensorPtr<Real>& w,
                       const TensorPtr<Real>& x) {
  if (w->shape.size() != 2 || x->shape.size() != 1 || w->shape[1] != x->shape[0])
    throw ShapeError("matvec shape mismatch: " + shape_str(w->shape) + " vs " +
                     shape_str(x->shape));
  const std::size_t m = w->shape[0], n = w->shape[1];
  std::vector<Real> out(m, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    Real acc = 0;
    const Real* row = w->value.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x->value[j];
    out[i] = acc;
  }
  bool rg = w->requires_grad || x->requires_grad;
  auto res = detail::op_output(tape, {m}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([w, x, res, m, n] {
      if (!detail::has_flow(res)) return;
      const auto& g = res->grad;
      if (w->requires_grad) {
        w->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) w->grad[i * n + j] += g[i] * x->value[j];
      }
      if (x->requires_grad) {
        x->ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
          const Real* row = w->value.data() + i * n;
          for (std::size_t j = 0; j < n; ++j) x->grad[j] += row[j] * g[i];
        }
      }
    });
  }
  return res;
}

// W[m x n]^T * x[m] -> y[n]; used where weights are stored input-major.
template <typename Real>
TensorPtr<Real> tmatvec(Tape<Real>& tape, const TensorPtr<Real>& w,
                        const TensorPtr<Real>& x) {
  if (w->shape.size() != 2 || x->shape.size() != 1 || w->shape[0] != x->shape[0])
    throw ShapeError("tmatvec shape mismatch: " + shape_str(w->shape) + " vs " +
                     shape_str(x->shape));
  const std::size_t m = w->shape[0], n = w->shape[1];
  std::vector<Real> out(n, Real(0));
  for (std::size_t i = 0; i < m; ++i) {
    const Real xv = x->value[i];
    const Real* row = w->value.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += row[j] * xv;
  }
  bool rg = w->requires_grad || x->requires_grad;
  auto res = detail::op_output(tape, {n}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([w, x, res, m, n] {
      if (!detail::has_flow(res)) return;
      const auto& g = res->grad;
      if (w->requires_grad) {
        w->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) w->grad[i * n + j] += x->value[i] * g[j];
      }
      if (x->requires_grad) {
        x->ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
          Real acc = 0;
          const Real* row = w->value.data() + i * n;
          for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
          x->grad[i] += acc;
        }
      }
    });
  }
  return res;
}

// Elementwise addition; the only broadcast allowed is matrix + row bias.
template <typename Real>
TensorPtr<Real> add(Tape<Real>& tape, const TensorPtr<Real>& a,
                    const TensorPtr<Real>& b) {
  const bool same = a->shape == b->shape;
  const bool bias_rows = a->shape.size() == 2 && b->shape.size() == 1 &&
                         a->shape[1] == b->shape[0];
  if (!same && !bias_rows)
    throw ShapeError("add shape mismatch: " + shape_str(a->shape) + " vs " +
                     shape_str(b->shape));
  std::vector<Real> out(a->value);
  if (same) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->value[i];
  } else {
    const std::size_t n = b->shape[0];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->value[i % n];
  }
  bool rg = a->requires_grad || b->requires_grad;
  auto res = detail::op_output(tape, a->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([a, b, res, same] {
      if (!detail::has_flow(res)) return;
      const auto& g = res->grad;
      if (a->requires_grad) {
        a->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) a->grad[i] += g[i];
      }
      if (b->requires_grad) {
        b->ensure_grad();
        if (same) {
          for (std::size_t i = 0; i < g.size(); ++i) b->grad[i] += g[i];
        } else {
          const std::size_t n = b->shape[0];
          for (std::size_t i = 0; i < g.size(); ++i) b->grad[i % n] += g[i];
        }
      }
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> mul(Tape<Real>& tape, const TensorPtr<Real>& a,
                    const TensorPtr<Real>& b) {
  if (a->shape != b->shape)
    throw ShapeError("mul shape mismatch: " + shape_str(a->shape) + " vs " +
                     shape_str(b->shape));
  std::vector<Real> out(a->numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->value[i] * b->value[i];
  bool rg = a->requires_grad || b->requires_grad;
  auto res = detail::op_output(tape, a->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([a, b, res] {
      if (!detail::has_flow(res)) return;
      const auto& g = res->grad;
      if (a->requires_grad) {
        a->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) a->grad[i] += g[i] * b->value[i];
      }
      if (b->requires_grad) {
        b->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) b->grad[i] += g[i] * a->value[i];
      }
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> dot(Tape<Real>& tape, const TensorPtr<Real>& a,
                    const TensorPtr<Real>& b) {
  if (a->shape.size() != 1 || a->shape != b->shape)
    throw ShapeError("dot shape mismatch: " + shape_str(a->shape) + " vs " +
                     shape_str(b->shape));
  Real acc = 0;
  for (std::size_t i = 0; i < a->numel(); ++i) acc += a->value[i] * b->value[i];
  bool rg = a->requires_grad || b->requires_grad;
  auto res = detail::op_output(tape, {1}, {acc}, rg);
  if (tape.recording() && rg) {
    tape.record([a, b, res] {
      if (!detail::has_flow(res)) return;
      const Real g = res->grad[0];
      if (a->requires_grad) {
        a->ensure_grad();
        for (std::size_t i = 0; i < a->numel(); ++i) a->grad[i] += g * b->value[i];
      }
      if (b->requires_grad) {
        b->ensure_grad();
        for (std::size_t i = 0; i < b->numel(); ++i) b->grad[i] += g * a->value[i];
      }
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> concat(Tape<Real>& tape, const std::vector<TensorPtr<Real>>& xs) {
  if (xs.empty()) throw ValueError("concat of zero tensors");
  std::size_t total = 0;
  bool rg = false;
  for (const auto& x : xs) {
    if (x->shape.size() != 1)
      throw ShapeError("concat expects vectors, got " + shape_str(x->shape));
    total += x->numel();
    rg = rg || x->requires_grad;
  }
  std::vector<Real> out;
  out.reserve(total);
  for (const auto& x : xs) out.insert(out.end(), x->value.begin(), x->value.end());
  auto res = detail::op_output(tape, {total}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([xs, res] {
      if (!detail::has_flow(res)) return;
      std::size_t off = 0;
      for (const auto& x : xs) {
        if (x->requires_grad) {
          x->ensure_grad();
          for (std::size_t i = 0; i < x->numel(); ++i) x->grad[i] += res->grad[off + i];
        }
        off += x->numel();
      }
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> slice(Tape<Real>& tape, const TensorPtr<Real>& x,
                      std::size_t start, std::size_t len) {
  if (x->shape.size() != 1)
    throw ShapeError("slice expects a vector, got " + shape_str(x->shape));
  if (start + len > x->numel() || len == 0)
    throw IndexError("slice [" + std::to_string(start) + ", " +
                     std::to_string(start + len) + ") out of range for length " +
                     std::to_string(x->numel()));
  std::vector<Real> out(x->value.begin() + start, x->value.begin() + start + len);
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, {len}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, res, start, len] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < len; ++i) x->grad[start + i] += res->grad[i];
    });
  }
  return res;
}

// Embedding lookup: one row of a [R x D] table. Backward is a sparse
// scatter-add, so repeated lookups of the same row accumulate.
template <typename Real>
TensorPtr<Real> row_gather(Tape<Real>& tape, const TensorPtr<Real>& table,
                           std::size_t row) {
  if (table->shape.size() != 2)
    throw ShapeError("row_gather expects a matrix, got " + shape_str(table->shape));
  if (row >= table->shape[0])
    throw IndexError("row " + std::to_string(row) + " out of range for table " +
                     shape_str(table->shape));
  const std::size_t d = table->shape[1];
  std::vector<Real> out(table->value.begin() + row * d,
                        table->value.begin() + (row + 1) * d);
  bool rg = table->requires_grad;
  auto res = detail::op_output(tape, {d}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([table, res, row, d] {
      if (!detail::has_flow(res)) return;
      table->ensure_grad();
      for (std::size_t i = 0; i < d; ++i) table->grad[row * d + i] += res->grad[i];
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> softmax(Tape<Real>& tape, const TensorPtr<Real>& x) {
  if (x->shape.size() != 1 || x->numel() == 0)
    throw ValueError("softmax expects a non-empty vector, got " + shape_str(x->shape));
  const std::size_t n = x->numel();
  const Real mx = *std::max_element(x->value.begin(), x->value.end());
  std::vector<Real> out(n);
  Real total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(x->value[i] - mx);
    total += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= total;
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, {n}, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, res, n] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      Real gy = 0;
      for (std::size_t i = 0; i < n; ++i) gy += res->grad[i] * res->value[i];
      for (std::size_t i = 0; i < n; ++i)
        x->grad[i] += res->value[i] * (res->grad[i] - gy);
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> leaky_relu(Tape<Real>& tape, const TensorPtr<Real>& x, Real slope) {
  if (!(slope > Real(0) && slope < Real(1)))
    throw ValueError("leaky_relu slope must lie in (0, 1)");
  std::vector<Real> out(x->numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Real v = x->value[i];
    out[i] = v >= Real(0) ? v : slope * v;
  }
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, x->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, res, slope] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < x->numel(); ++i)
        x->grad[i] += res->grad[i] * (x->value[i] >= Real(0) ? Real(1) : slope);
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> tanh_op(Tape<Real>& tape, const TensorPtr<Real>& x) {
  std::vector<Real> out(x->numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x->value[i]);
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, x->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, res] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < x->numel(); ++i)
        x->grad[i] += res->grad[i] * (Real(1) - res->value[i] * res->value[i]);
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> sum(Tape<Real>& tape, const TensorPtr<Real>& x) {
  Real acc = 0;
  for (Real v : x->value) acc += v;
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, {1}, {acc}, rg);
  if (tape.recording() && rg) {
    tape.record([x, res] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < x->numel(); ++i) x->grad[i] += res->grad[0];
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> sum_squares(Tape<Real>& tape, const TensorPtr<Real>& x) {
  Real acc = 0;
  for (Real v : x->value) acc += v * v;
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, {1}, {acc}, rg);
  if (tape.recording() && rg) {
    tape.record([x, res] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < x->numel(); ++i)
        x->grad[i] += Real(2) * res->grad[0] * x->value[i];
    });
  }
  return res;
}

// x * s with s a recorded 1-element tensor (e.g. one attention weight).
template <typename Real>
TensorPtr<Real> scale(Tape<Real>& tape, const TensorPtr<Real>& x,
                      const TensorPtr<Real>& s) {
  if (s->numel() != 1)
    throw ShapeError("scale factor must be a scalar tensor, got " + shape_str(s->shape));
  const Real sv = s->value[0];
  std::vector<Real> out(x->numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x->value[i] * sv;
  bool rg = x->requires_grad || s->requires_grad;
  auto res = detail::op_output(tape, x->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, s, res, sv] {
      if (!detail::has_flow(res)) return;
      if (x->requires_grad) {
        x->ensure_grad();
        for (std::size_t i = 0; i < x->numel(); ++i) x->grad[i] += res->grad[i] * sv;
      }
      if (s->requires_grad) {
        s->ensure_grad();
        Real acc = 0;
        for (std::size_t i = 0; i < x->numel(); ++i) acc += res->grad[i] * x->value[i];
        s->grad[0] += acc;
      }
    });
  }
  return res;
}

template <typename Real>
TensorPtr<Real> scale_const(Tape<Real>& tape, const TensorPtr<Real>& x, Real c) {
  std::vector<Real> out(x->numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x->value[i] * c;
  bool rg = x->requires_grad;
  auto res = detail::op_output(tape, x->shape, std::move(out), rg);
  if (tape.recording() && rg) {
    tape.record([x, res, c] {
      if (!detail::has_flow(res)) return;
      x->ensure_grad();
      for (std::size_t i = 0; i < x->numel(); ++i) x->grad[i] += res->grad[i] * c;
    });
  }
  return res;
}

// -log(p[target] + eps) on an already normalised probability vector.
template <typename Real>
TensorPtr<Real> cross_entropy(Tape<Real>& tape, const TensorPtr<Real>& probs,
                              std::size_t target, Real eps_clip = Real(1e-12)) {
  if (probs->shape.size() != 1)
    throw ShapeError("cross_entropy expects a probability vector, got " +
                     shape_str(probs->shape));
  if (target >= probs->numel())
    throw IndexError("cross_entropy target " + std::to_string(target) +
                     " out of range for " + std::to_string(probs->numel()) + " classes");
  Real total = 0;
  for (Real v : probs->value) total += v;
  if (std::abs(total - Real(1)) > Real(1e-4))
    throw ValueError("cross_entropy input does not sum to 1 (sum=" +
                     std::to_string(static_cast<double>(total)) + ")");
  const Real p = probs->value[target] + eps_clip;
  bool rg = probs->requires_grad;
  auto res = detail::op_output(tape, {1}, {-std::log(p)}, rg);
  if (tape.recording() && rg) {
    tape.record([probs, res, target, p] {
      if (!detail::has_flow(res)) return;
      probs->ensure_grad();
      probs->grad[target] += -res->grad[0] / p;
    });
  }
  return res;
}

// lambda * sum over params of ||p||^2, as a single recorded node.
template <typename Real>
TensorPtr<Real> l2_norm_squared(Tape<Real>& tape,
                                const std::vector<TensorPtr<Real>>& params) {
  Real acc = 0;
  bool rg = false;
  for (const auto& p : params) {
    for (Real v : p->value) acc += v * v;
    rg = rg || p->requires_grad;
  }
  auto res = detail::op_output(tape, {1}, {acc}, rg);
  if (tape.recording() && rg) {
    tape.record([params, res] {
      if (!detail::has_flow(res)) return;
      const Real g = res->grad[0];
      for (const auto& p : params) {
        if (!p->requires_grad) continue;
        p->ensure_grad();
        for (std::size_t i = 0; i < p->numel(); ++i)
          p->grad[i] += Real(2) * g * p->value[i];
      }
    });
  }
  return res;
}

}  // namespace sgrec

#endif  // SGREC_TENSOR_HPP
