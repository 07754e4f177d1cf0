#pragma once

#include <vector>

#include "simnp/diff/ops.hpp"
#include "simnp/diff/tensor.hpp"
#include "simnp/util/rng.hpp"

namespace simnp::diff {

enum class Activation { relu, leaky_relu, tanh };

// Plain fully-connected stack. The hidden activation sits between layers;
// the last layer is linear (callers apply their own output nonlinearity).
struct Mlp {
  std::vector<Tensor> weights;  // layer k: (in_k x out_k)
  std::vector<Tensor> biases;   // layer k: (out_k)
  Activation activation = Activation::leaky_relu;
  double leaky_slope = 0.01;

  static Mlp create(const std::vector<Index>& dims, Activation act, Rng& rng,
                    bool requires_grad = true);

  // x: (R x in) -> (R x out)
  Tensor forward(const Tensor& x) const;

  std::vector<Tensor> parameters() const;
  Index input_dim() const { return weights.front().rows(); }
  Index output_dim() const { return weights.back().cols(); }
};

}  // namespace simnp::diff
