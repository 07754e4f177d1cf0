#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "simnp/util/rng.hpp"

namespace simnp::diff {

using Index = std::int64_t;
using Shape = std::vector<Index>;

// Global value precision. f64 keeps raw doubles; f32 rounds every op result
// (and Adam-updated parameters) through float so all stored values are
// 32-bit representable. Gradient-check tests run under f64.
enum class Precision { f32, f64 };

Precision default_precision();
void set_default_precision(Precision p);

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // sized lazily; valid after Tape::backward
  bool requires_grad = false;
};

// Value-semantic handle over shared storage. Rank 1 or 2; row-major.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor randn(Shape shape, double stddev, Rng& rng, bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  Index rank() const { return static_cast<Index>(impl_->shape.size()); }
  Index rows() const { return impl_->shape[0]; }
  Index cols() const { return rank() == 2 ? impl_->shape[1] : 1; }
  Index numel() const { return static_cast<Index>(impl_->data.size()); }

  double* data() { return impl_->data.data(); }
  const double* data() const { return impl_->data.data(); }
  std::span<double> values() { return impl_->data; }
  std::span<const double> values() const { return impl_->data; }
  double item() const;
  double at(Index r, Index c) const { return impl_->data[r * cols() + c]; }

  bool requires_grad() const { return impl_->requires_grad; }

  // Gradient of the last backward pass; zeros if this leaf was not reached.
  std::span<const double> grad() const;
  std::span<double> grad_mut();

  std::shared_ptr<TensorImpl> impl() const { return impl_; }
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<TensorImpl> impl_;
};

// Ordered record of executed primitive ops. Append order is topological by
// construction; backward visits nodes exactly once in reverse order.
class Tape {
 public:
  struct Node {
    std::shared_ptr<TensorImpl> out;
    std::vector<std::shared_ptr<TensorImpl>> inputs;
    std::function<void(TensorImpl& out)> backward;
    const char* op = "";
  };

  // Accumulates gradients for every requires_grad tensor reachable from
  // loss. Grad buffers are zeroed first, so repeated calls are idempotent.
  void backward(const Tensor& loss);

  void record(Node node) { nodes_.push_back(std::move(node)); }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  std::vector<Node> nodes_;
};

// RAII activation of a tape on the current thread. Ops record a node only
// when a tape is active and some input requires grad. One writer per tape.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

Tape* active_tape();

// Rounds through float in f32 mode and rejects non-finite values.
// Every primitive funnels its output through this.
void finalize_values(std::vector<double>& values, const char* op);

void ensure_grad(TensorImpl& t);

}  // namespace simnp::diff
