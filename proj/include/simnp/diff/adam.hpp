#pragma once

#include <span>
#include <vector>

#include "simnp/diff/tensor.hpp"

namespace simnp::diff {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m, v;
  std::int64_t step = 0;
};

// One bias-corrected Adam update. state.m/v are resized on first use.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg);

// Convenience wrapper stepping a fixed set of tensors with shared config.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void add(const Tensor& t) {
    params_.push_back(t);
    states_.emplace_back();
  }
  void add(const std::vector<Tensor>& ts) {
    for (const Tensor& t : ts) add(t);
  }

  // Applies one step using each tensor's current .grad().
  void step();

  AdamConfig& config() { return cfg_; }
  const std::vector<Tensor>& params() const { return params_; }

 private:
  AdamConfig cfg_;
  std::vector<Tensor> params_;
  std::vector<AdamState> states_;
};

}  // namespace simnp::diff
