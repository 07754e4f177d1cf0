#include "simnp/diff/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace simnp::diff {

namespace {
Precision g_precision = Precision::f64;
thread_local Tape* g_active_tape = nullptr;

Index shape_numel(const Shape& s) {
  Index n = 1;
  for (Index d : s) n *= d;
  return n;
}
}  // namespace

Precision default_precision() { return g_precision; }
void set_default_precision(Precision p) { g_precision = p; }

Tape* active_tape() { return g_active_tape; }

TapeScope::TapeScope(Tape& tape) : previous_(g_active_tape) { g_active_tape = &tape; }
TapeScope::~TapeScope() { g_active_tape = previous_; }

void finalize_values(std::vector<double>& values, const char* op) {
  if (g_precision == Precision::f32) {
    for (double& v : values) v = static_cast<double>(static_cast<float>(v));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string("op '") + op + "' produced a non-finite value");
    }
  }
}

void ensure_grad(TensorImpl& t) {
  if (t.grad.size() != t.data.size()) t.grad.assign(t.data.size(), 0.0);
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data.assign(shape_numel(impl->shape), 0.0);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (double& v : t.impl()->data) v = value;
  finalize_values(t.impl()->data, "full");
  return t;
}

Tensor Tensor::from_data(Shape shape, std::vector<double> values, bool requires_grad) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  if (static_cast<Index>(values.size()) != shape_numel(impl->shape)) {
    throw std::invalid_argument("from_data: value count does not match shape");
  }
  impl->data = std::move(values);
  impl->requires_grad = requires_grad;
  finalize_values(impl->data, "from_data");
  return Tensor(std::move(impl));
}

Tensor Tensor::randn(Shape shape, double stddev, Rng& rng, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (double& v : t.impl()->data) v = rng.normal(0.0, stddev);
  finalize_values(t.impl()->data, "randn");
  return t;
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from_data({1}, {v}, requires_grad);
}

double Tensor::item() const {
  if (numel() != 1) throw std::logic_error("item() on non-scalar tensor");
  return impl_->data[0];
}

std::span<const double> Tensor::grad() const {
  ensure_grad(*impl_);
  return impl_->grad;
}

std::span<double> Tensor::grad_mut() {
  ensure_grad(*impl_);
  return impl_->grad;
}

void Tape::backward(const Tensor& loss) {
  if (loss.numel() != 1) throw std::invalid_argument("backward: loss must be scalar");

  // Zero every grad buffer this tape touches, then seed the loss.
  for (auto& node : nodes_) {
    node.out->grad.assign(node.out->data.size(), 0.0);
    for (auto& in : node.inputs) {
      if (in->requires_grad) in->grad.assign(in->data.size(), 0.0);
    }
  }
  ensure_grad(*loss.impl());
  loss.impl()->grad.assign(1, 1.0);

  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->out->grad.empty()) continue;  // never reached from the loss
    it->backward(*it->out);
  }
}

}  // namespace simnp::diff
