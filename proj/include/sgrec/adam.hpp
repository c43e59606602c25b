#ifndef SGREC_ADAM_HPP
#define SGREC_ADAM_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sgrec/common.hpp"
#include "sgrec/tensor.hpp"

namespace sgrec {

// Ordered registry of named trainable tensors (the regularised set).
template <typename Real>
class ParamSet {
 public:
  void add(const std::string& name, TensorPtr<Real> t) {
    for (const auto& [n, _] : entries_)
      if (n == name) throw StateError("parameter registered twice: " + name);
    t->requires_grad = true;
    entries_.emplace_back(name, std::move(t));
  }

  const TensorPtr<Real>& find(const std::string& name) const {
    for (const auto& [n, t] : entries_)
      if (n == name) return t;
    throw StateError("unknown parameter: " + name);
  }

  std::vector<TensorPtr<Real>> tensors() const {
    std::vector<TensorPtr<Real>> out;
    out.reserve(entries_.size());
    for (const auto& [_, t] : entries_) out.push_back(t);
    return out;
  }

  const std::vector<std::pair<std::string, TensorPtr<Real>>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

  void zero_grads() {
    for (auto& [_, t] : entries_) t->zero_grad();
  }

 private:
  std::vector<std::pair<std::string, TensorPtr<Real>>> entries_;
};

template <typename Real>
struct AdamState {
  Real learning_rate = Real(0.005);
  Real beta1 = Real(0.9);
  Real beta2 = Real(0.999);
  Real epsilon = Real(1e-8);
  std::int64_t step = 0;
  // Moment buffers, aligned with the ParamSet registration order.
  std::vector<std::vector<Real>> m;
  std::vector<std::vector<Real>> v;

  static AdamState init(const ParamSet<Real>& params, Real lr) {
    AdamState s;
    s.learning_rate = lr;
    for (const auto& [_, t] : params.entries()) {
      s.m.emplace_back(t->numel(), Real(0));
      s.v.emplace_back(t->numel(), Real(0));
    }
    return s;
  }
};

// One bias-corrected Adam update over every registered parameter.
// Gradients are consumed: all grads are zeroed after the step.
template <typename Real>
void adam_step(ParamSet<Real>& params, AdamState<Real>& state) {
  const auto& entries = params.entries();
  if (state.m.size() != entries.size() || state.v.size() != entries.size())
    throw StateError("adam state does not match parameter set size");
  for (const auto& [name, t] : entries)
    if (t->grad.size() != t->numel())
      throw StateError("adam_step: parameter has no gradient: " + name);

  state.step += 1;
  const Real b1t = Real(1) - std::pow(state.beta1, Real(state.step));
  const Real b2t = Real(1) - std::pow(state.beta2, Real(state.step));
  for (std::size_t pi = 0; pi < entries.size(); ++pi) {
    auto& t = entries[pi].second;
    auto& m = state.m[pi];
    auto& v = state.v[pi];
    for (std::size_t i = 0; i < t->numel(); ++i) {
      const Real g = t->grad[i];
      m[i] = state.beta1 * m[i] + (Real(1) - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (Real(1) - state.beta2) * g * g;
      const Real mhat = m[i] / b1t;
      const Real vhat = v[i] / b2t;
      t->value[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    }
    t->zero_grad();
  }
}

}  // namespace sgrec

#endif  // SGREC_ADAM_HPP
