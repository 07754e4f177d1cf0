#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "simnp/diff/tensor.hpp"

namespace testutil {

inline double rel_err(double got, double want, double floor = 1e-12) {
  const double denom = std::max({std::abs(got), std::abs(want), floor});
  return std::abs(got - want) / denom;
}

// Central finite differences of eval() w.r.t. every element of leaf,
// compared elementwise against analytic. eval must recompute the scalar
// from the leaf's current values. Returns the worst relative error;
// entries where both sides are below atol count as exact.
inline double fd_max_rel_err(const std::function<double()>& eval, simnp::diff::Tensor leaf,
                             std::span<const double> analytic, double step = 1e-5,
                             double atol = 1e-9) {
  double worst = 0.0;
  double* vals = leaf.data();
  for (simnp::diff::Index i = 0; i < leaf.numel(); ++i) {
    const double keep = vals[i];
    vals[i] = keep + step;
    const double fp = eval();
    vals[i] = keep - step;
    const double fm = eval();
    vals[i] = keep;
    const double fd = (fp - fm) / (2.0 * step);
    const double an = analytic[i];
    if (std::abs(fd) < atol && std::abs(an) < atol) continue;
    worst = std::max(worst, rel_err(an, fd));
  }
  return worst;
}

// Naive triple-loop matmul oracle.
inline std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                        int r, int k, int c) {
  std::vector<double> out(r * c, 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      for (int l = 0; l < k; ++l) out[i * c + j] += a[i * k + l] * b[l * c + j];
  return out;
}

}  // namespace testutil
