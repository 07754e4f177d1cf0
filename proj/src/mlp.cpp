#include "simnp/diff/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace simnp::diff {

Mlp Mlp::create(const std::vector<Index>& dims, Activation act, Rng& rng, bool requires_grad) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least one layer");
  Mlp mlp;
  mlp.activation = act;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(dims[k]));
    mlp.weights.push_back(Tensor::randn({dims[k], dims[k + 1]}, stddev, rng, requires_grad));
    mlp.biases.push_back(Tensor::zeros({dims[k + 1]}, requires_grad));
  }
  return mlp;
}

Tensor Mlp::forward(const Tensor& x) const {
  Tensor h = x;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    h = add_rowvec(matmul(h, weights[k]), biases[k]);
    if (k + 1 < weights.size()) {
      switch (activation) {
        case Activation::relu: h = relu(h); break;
        case Activation::leaky_relu: h = leaky_relu(h, leaky_slope); break;
        case Activation::tanh: h = tanh(h); break;
      }
    }
  }
  return h;
}

std::vector<Tensor> Mlp::parameters() const {
  std::vector<Tensor> ps;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    ps.push_back(weights[k]);
    ps.push_back(biases[k]);
  }
  return ps;
}

}  // namespace simnp::diff
