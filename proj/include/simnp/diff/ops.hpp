#pragma once

#include <initializer_list>

#include "simnp/diff/tensor.hpp"

namespace simnp::diff {

// Elementwise, same shape.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

// Scale by a plain constant.
Tensor scale(const Tensor& a, double c);
inline Tensor neg(const Tensor& a) { return scale(a, -1.0); }

// Multiply every element by a scalar tensor (gradient flows into s).
Tensor scale_st(const Tensor& a, const Tensor& s);

// X (R x C) + v (C) broadcast over rows.
Tensor add_rowvec(const Tensor& x, const Tensor& v);
// Row i of X scaled by v[i]; v is (R) or (R x 1).
Tensor mul_colvec(const Tensor& x, const Tensor& v);

// a (R x K) * b (K x C).
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Elementwise nonlinearities.
Tensor exp(const Tensor& x);
Tensor log(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor softplus(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);
Tensor reciprocal(const Tensor& x);
Tensor clamp_min(const Tensor& x, double lo);

// Row-wise softmax with max subtraction, (R x C).
Tensor row_softmax(const Tensor& x);
// Euclidean norm of each row, (R x C) -> (R x 1).
Tensor row_l2norm(const Tensor& x);
// Euclidean norm over all elements -> scalar.
Tensor l2_norm(const Tensor& x);

// Reductions to scalar.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor mse(const Tensor& a, const Tensor& b);

// Row selection / placement. Accumulation order is ascending entry index,
// so gradients are bit-reproducible.
Tensor gather_rows(const Tensor& x, const std::vector<Index>& idx);
Tensor scatter_rows(const Tensor& x, const std::vector<Index>& idx, Index out_rows);
// Rows sharing a segment id are summed (ascending row order) into out[seg].
Tensor segment_sum(const Tensor& x, const std::vector<Index>& seg, Index num_segments);

Tensor concat_cols(const std::vector<Tensor>& xs);
Tensor concat_rows(const std::vector<Tensor>& xs);
Tensor slice_cols(const Tensor& x, Index c0, Index c1);
Tensor reshape(const Tensor& x, Shape shape);

// out[i,j] = sum_{k<j} x[i,k].
Tensor row_cumsum_exclusive(const Tensor& x);

}  // namespace simnp::diff
