#include "simnp/diff/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simnp::diff {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

Tensor make_result(Shape shape, std::vector<double> values, const char* op,
                   std::vector<std::shared_ptr<TensorImpl>> inputs,
                   std::function<void(TensorImpl&)> backward, bool requires_grad) {
  finalize_values(values, op);
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(values);
  impl->requires_grad = requires_grad;
  if (requires_grad && active_tape() != nullptr) {
    Tape::Node node;
    node.out = impl;
    node.inputs = std::move(inputs);
    node.backward = std::move(backward);
    node.op = op;
    active_tape()->record(std::move(node));
  }
  return Tensor(std::move(impl));
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  std::vector<double> out(a.numel());
  for (Index i = 0; i < a.numel(); ++i) out[i] = a.data()[i] + b.data()[i];
  auto ai = a.impl(), bi = b.impl();
  return make_result(
      a.shape(), std::move(out), "add", {ai, bi},
      [ai, bi](TensorImpl& o) {
        if (ai->requires_grad) {
          ensure_grad(*ai);
          for (std::size_t i = 0; i < o.grad.size(); ++i) ai->grad[i] += o.grad[i];
        }
        if (bi->requires_grad) {
          ensure_grad(*bi);
          for (std::size_t i = 0; i < o.grad.size(); ++i) bi->grad[i] += o.grad[i];
        }
      },
      a.requires_grad() || b.requires_grad());
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  std::vector<double> out(a.numel());
  for (Index i = 0; i < a.numel(); ++i) out[i] = a.data()[i] - b.data()[i];
  auto ai = a.impl(), bi = b.impl();
  return make_result(
      a.shape(), std::move(out), "sub", {ai, bi},
      [ai, bi](TensorImpl& o) {
        if (ai->requires_grad) {
          ensure_grad(*ai);
          for (std::size_t i = 0; i < o.grad.size(); ++i) ai->grad[i] += o.grad[i];
        }
        if (bi->requires_grad) {
          ensure_grad(*bi);
          for (std::size_t i = 0; i < o.grad.size(); ++i) bi->grad[i] -= o.grad[i];
        }
      },
      a.requires_grad() || b.requires_grad());
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  std::vector<double> out(a.numel());
  for (Index i = 0; i < a.numel(); ++i) out[i] = a.data()[i] * b.data()[i];
  auto ai = a.impl(), bi = b.impl();
  return make_result(
      a.shape(), std::move(out), "mul", {ai, bi},
      [ai, bi](TensorImpl& o) {
        if (ai->requires_grad) {
          ensure_grad(*ai);
          for (std::size_t i = 0; i < o.grad.size(); ++i) ai->grad[i] += o.grad[i] * bi->data[i];
        }
        if (bi->requires_grad) {
          ensure_grad(*bi);
          for (std::size_t i = 0; i < o.grad.size(); ++i) bi->grad[i] += o.grad[i] * ai->data[i];
        }
      },
      a.requires_grad() || b.requires_grad());
}

Tensor scale(const Tensor& a, double c) {
  std::vector<double> out(a.numel());
  for (Index i = 0; i < a.numel(); ++i) out[i] = a.data()[i] * c;
  auto ai = a.impl();
  return make_result(
      a.shape(), std::move(out), "scale", {ai},
      [ai, c](TensorImpl& o) {
        if (!ai->requires_grad) return;
        ensure_grad(*ai);
        for (std::size_t i = 0; i < o.grad.size(); ++i) ai->grad[i] += o.grad[i] * c;
      },
      a.requires_grad());
}

Tensor scale_st(const Tensor& a, const Tensor& s) {
  if (s.numel() != 1) throw std::invalid_argument("scale_st: scalar tensor expected");
  const double c = s.data()[0];
  std::vector<double> out(a.numel());
  for (Index i = 0; i < a.numel(); ++i) out[i] = a.data()[i] * c;
  auto ai = a.impl(), si = s.impl();
  return make_result(
      a.shape(), std::move(out), "scale_st", {ai, si},
      [ai, si, c](TensorImpl& o) {
        if (ai->requires_grad) {
          ensure_grad(*ai);
          for (std::size_t i = 0; i < o.grad.size(); ++i) ai->grad[i] += o.grad[i] * c;
        }
        if (si->requires_grad) {
          ensure_grad(*si);
          double acc = 0.0;
          for (std::size_t i = 0; i < o.grad.size(); ++i) acc += o.grad[i] * ai->data[i];
          si->grad[0] += acc;
        }
      },
      a.requires_grad() || s.requires_grad());
}

Tensor add_rowvec(const Tensor& x, const Tensor& v) {
  const Index r = x.rows(), c = x.cols();
  if (v.numel() != c) throw std::invalid_argument("add_rowvec: length mismatch");
  std::vector<double> out(x.numel());
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) out[i * c + j] = x.data()[i * c + j] + v.data()[j];
  auto xi = x.impl(), vi = v.impl();
  return make_result(
      x.shape(), std::move(out), "add_rowvec", {xi, vi},
      [xi, vi, r, c](TensorImpl& o) {
        if (xi->requires_grad) {
          ensure_grad(*xi);
          for (std::size_t i = 0; i < o.grad.size(); ++i) xi->grad[i] += o.grad[i];
        }
        if (vi->requires_grad) {
          ensure_grad(*vi);
          for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) vi->grad[j] += o.grad[i * c + j];
        }
      },
      x.requires_grad() || v.requires_grad());
}

Tensor mul_colvec(const Tensor& x, const Tensor& v) {
  const Index r = x.rows(), c = x.cols();
  if (v.numel() != r) throw std::invalid_argument("mul_colvec: length mismatch");
  std::vector<double> out(x.numel());
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) out[i * c + j] = x.data()[i * c + j] * v.data()[i];
  auto xi = x.impl(), vi = v.impl();
  return make_result(
      x.shape(), std::move(out), "mul_colvec", {xi, vi},
      [xi, vi, r, c](TensorImpl& o) {
        if (xi->requires_grad) {
          ensure_grad(*xi);
          for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) xi->grad[i * c + j] += o.grad[i * c + j] * vi->data[i];
        }
        if (vi->requires_grad) {
          ensure_grad(*vi);
          for (Index i = 0; i < r; ++i) {
            double acc = 0.0;
            for (Index j = 0; j < c; ++j) acc += o.grad[i * c + j] * xi->data[i * c + j];
            vi->grad[i] += acc;
          }
        }
      },
      x.requires_grad() || v.requires_grad());
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows())
    throw std::invalid_argument("matmul: incompatible shapes");
  const Index r = a.rows(), k = a.cols(), c = b.cols();
  std::vector<double> out(r * c);
  {
    CMap am(a.data(), r, k), bm(b.data(), k, c);
    MMap om(out.data(), r, c);
    om.noalias() = am * bm;
  }
  auto ai = a.impl(), bi = b.impl();
  return make_result(
      {r, c}, std::move(out), "matmul", {ai, bi},
      [ai, bi, r, k, c](TensorImpl& o) {
        CMap gm(o.grad.data(), r, c);
        if (ai->requires_grad) {
          ensure_grad(*ai);
          CMap bm(bi->data.data(), k, c);
          MMap gam(ai->grad.data(), r, k);
          gam.noalias() += gm * bm.transpose();
        }
        if (bi->requires_grad) {
          ensure_grad(*bi);
          CMap am(ai->data.data(), r, k);
          MMap gbm(bi->grad.data(), k, c);
          gbm.noalias() += am.transpose() * gm;
        }
      },
      a.requires_grad() || b.requires_grad());
}

Tensor transpose(const Tensor& a) {
  const Index r = a.rows(), c = a.cols();
  std::vector<double> out(a.numel());
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) out[j * r + i] = a.data()[i * c + j];
  auto ai = a.impl();
  return make_result(
      {c, r}, std::move(out), "transpose", {ai},
      [ai, r, c](TensorImpl& o) {
        if (!ai->requires_grad) return;
        ensure_grad(*ai);
        for (Index i = 0; i < r; ++i)
          for (Index j = 0; j < c; ++j) ai->grad[i * c + j] += o.grad[j * r + i];
      },
      a.requires_grad());
}

namespace {

template <typename Fwd, typename Bwd>
Tensor unary_op(const Tensor& x, const char* name, Fwd fwd, Bwd bwd_factor_from_in_out) {
  std::vector<double> out(x.numel());
  for (Index i = 0; i < x.numel(); ++i) out[i] = fwd(x.data()[i]);
  auto xi = x.impl();
  return make_result(
      x.shape(), std::move(out), name, {xi},
      [xi, bwd_factor_from_in_out](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (std::size_t i = 0; i < o.grad.size(); ++i)
          xi->grad[i] += o.grad[i] * bwd_factor_from_in_out(xi->data[i], o.data[i]);
      },
      x.requires_grad());
}

}  // namespace

Tensor exp(const Tensor& x) {
  return unary_op(x, "exp", [](double v) { return std::exp(v); },
                  [](double, double y) { return y; });
}

Tensor log(const Tensor& x) {
  return unary_op(x, "log", [](double v) { return std::log(v); },
                  [](double v, double) { return 1.0 / v; });
}

Tensor tanh(const Tensor& x) {
  return unary_op(x, "tanh", [](double v) { return std::tanh(v); },
                  [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& x) {
  return unary_op(x, "sigmoid", [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
                  [](double, double y) { return y * (1.0 - y); });
}

Tensor softplus(const Tensor& x) {
  // log(1+e^x) with the standard overflow-safe split.
  return unary_op(x, "softplus",
                  [](double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); },
                  [](double v, double) { return 1.0 / (1.0 + std::exp(-v)); });
}

Tensor relu(const Tensor& x) {
  return unary_op(x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
                  [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& x, double slope) {
  return unary_op(x, "leaky_relu", [slope](double v) { return v > 0.0 ? v : slope * v; },
                  [slope](double v, double) { return v > 0.0 ? 1.0 : slope; });
}

Tensor reciprocal(const Tensor& x) {
  return unary_op(x, "reciprocal", [](double v) { return 1.0 / v; },
                  [](double, double y) { return -y * y; });
}

Tensor clamp_min(const Tensor& x, double lo) {
  return unary_op(x, "clamp_min", [lo](double v) { return v < lo ? lo : v; },
                  [lo](double v, double) { return v >= lo ? 1.0 : 0.0; });
}

Tensor row_softmax(const Tensor& x) {
  const Index r = x.rows(), c = x.cols();
  std::vector<double> out(x.numel());
  for (Index i = 0; i < r; ++i) {
    const double* row = x.data() + i * c;
    double mx = row[0];
    for (Index j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    double denom = 0.0;
    for (Index j = 0; j < c; ++j) {
      out[i * c + j] = std::exp(row[j] - mx);
      denom += out[i * c + j];
    }
    for (Index j = 0; j < c; ++j) out[i * c + j] /= denom;
  }
  auto xi = x.impl();
  return make_result(
      x.shape(), std::move(out), "row_softmax", {xi},
      [xi, r, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (Index i = 0; i < r; ++i) {
          const double* y = o.data.data() + i * c;
          const double* g = o.grad.data() + i * c;
          double gy = 0.0;
          for (Index j = 0; j < c; ++j) gy += g[j] * y[j];
          for (Index j = 0; j < c; ++j) xi->grad[i * c + j] += y[j] * (g[j] - gy);
        }
      },
      x.requires_grad());
}

Tensor row_l2norm(const Tensor& x) {
  const Index r = x.rows(), c = x.cols();
  std::vector<double> out(r);
  for (Index i = 0; i < r; ++i) {
    double s = 0.0;
    for (Index j = 0; j < c; ++j) s += x.data()[i * c + j] * x.data()[i * c + j];
    out[i] = std::sqrt(s);
  }
  auto xi = x.impl();
  return make_result(
      {r, 1}, std::move(out), "row_l2norm", {xi},
      [xi, r, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (Index i = 0; i < r; ++i) {
          const double n = o.data[i];
          if (n == 0.0) continue;  // subgradient 0 at the origin
          const double g = o.grad[i] / n;
          for (Index j = 0; j < c; ++j) xi->grad[i * c + j] += g * xi->data[i * c + j];
        }
      },
      x.requires_grad());
}

Tensor l2_norm(const Tensor& x) {
  double s = 0.0;
  for (Index i = 0; i < x.numel(); ++i) s += x.data()[i] * x.data()[i];
  const double n = std::sqrt(s);
  auto xi = x.impl();
  return make_result(
      {1}, {n}, "l2_norm", {xi},
      [xi, n](TensorImpl& o) {
        if (!xi->requires_grad || n == 0.0) return;
        ensure_grad(*xi);
        const double g = o.grad[0] / n;
        for (std::size_t i = 0; i < xi->data.size(); ++i) xi->grad[i] += g * xi->data[i];
      },
      x.requires_grad());
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (Index i = 0; i < x.numel(); ++i) s += x.data()[i];
  auto xi = x.impl();
  return make_result(
      {1}, {s}, "sum", {xi},
      [xi](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (double& g : xi->grad) g += o.grad[0];
      },
      x.requires_grad());
}

Tensor mean(const Tensor& x) {
  const double inv = 1.0 / static_cast<double>(x.numel());
  double s = 0.0;
  for (Index i = 0; i < x.numel(); ++i) s += x.data()[i];
  auto xi = x.impl();
  return make_result(
      {1}, {s * inv}, "mean", {xi},
      [xi, inv](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (double& g : xi->grad) g += o.grad[0] * inv;
      },
      x.requires_grad());
}

Tensor mse(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mse");
  const double inv = 1.0 / static_cast<double>(a.numel());
  double s = 0.0;
  for (Index i = 0; i < a.numel(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  auto ai = a.impl(), bi = b.impl();
  return make_result(
      {1}, {s * inv}, "mse", {ai, bi},
      [ai, bi, inv](TensorImpl& o) {
        const double g = 2.0 * inv * o.grad[0];
        if (ai->requires_grad) {
          ensure_grad(*ai);
          for (std::size_t i = 0; i < ai->data.size(); ++i)
            ai->grad[i] += g * (ai->data[i] - bi->data[i]);
        }
        if (bi->requires_grad) {
          ensure_grad(*bi);
          for (std::size_t i = 0; i < bi->data.size(); ++i)
            bi->grad[i] -= g * (ai->data[i] - bi->data[i]);
        }
      },
      a.requires_grad() || b.requires_grad());
}

Tensor gather_rows(const Tensor& x, const std::vector<Index>& idx) {
  const Index c = x.cols(), r = x.rows();
  const Index n = static_cast<Index>(idx.size());
  std::vector<double> out(n * c);
  for (Index e = 0; e < n; ++e) {
    if (idx[e] < 0 || idx[e] >= r) throw std::out_of_range("gather_rows: index out of range");
    for (Index j = 0; j < c; ++j) out[e * c + j] = x.data()[idx[e] * c + j];
  }
  auto xi = x.impl();
  return make_result(
      {n, c}, std::move(out), "gather_rows", {xi},
      [xi, idx, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (std::size_t e = 0; e < idx.size(); ++e)
          for (Index j = 0; j < c; ++j) xi->grad[idx[e] * c + j] += o.grad[e * c + j];
      },
      x.requires_grad());
}

Tensor scatter_rows(const Tensor& x, const std::vector<Index>& idx, Index out_rows) {
  const Index c = x.cols();
  if (static_cast<Index>(idx.size()) != x.rows())
    throw std::invalid_argument("scatter_rows: index count mismatch");
  std::vector<double> out(out_rows * c, 0.0);
  for (std::size_t e = 0; e < idx.size(); ++e) {
    if (idx[e] < 0 || idx[e] >= out_rows) throw std::out_of_range("scatter_rows: index out of range");
    for (Index j = 0; j < c; ++j) out[idx[e] * c + j] += x.data()[e * c + j];
  }
  auto xi = x.impl();
  return make_result(
      {out_rows, c}, std::move(out), "scatter_rows", {xi},
      [xi, idx, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (std::size_t e = 0; e < idx.size(); ++e)
          for (Index j = 0; j < c; ++j) xi->grad[e * c + j] += o.grad[idx[e] * c + j];
      },
      x.requires_grad());
}

Tensor segment_sum(const Tensor& x, const std::vector<Index>& seg, Index num_segments) {
  const Index c = x.cols();
  if (static_cast<Index>(seg.size()) != x.rows())
    throw std::invalid_argument("segment_sum: segment id count mismatch");
  std::vector<double> out(num_segments * c, 0.0);
  for (std::size_t e = 0; e < seg.size(); ++e) {
    if (seg[e] < 0 || seg[e] >= num_segments) throw std::out_of_range("segment_sum: segment out of range");
    for (Index j = 0; j < c; ++j) out[seg[e] * c + j] += x.data()[e * c + j];
  }
  auto xi = x.impl();
  return make_result(
      {num_segments, c}, std::move(out), "segment_sum", {xi},
      [xi, seg, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (std::size_t e = 0; e < seg.size(); ++e)
          for (Index j = 0; j < c; ++j) xi->grad[e * c + j] += o.grad[seg[e] * c + j];
      },
      x.requires_grad());
}

Tensor concat_cols(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat_cols: empty input");
  const Index r = xs[0].rows();
  Index c = 0;
  for (const Tensor& t : xs) {
    if (t.rows() != r) throw std::invalid_argument("concat_cols: row mismatch");
    c += t.cols();
  }
  std::vector<double> out(r * c);
  std::vector<Index> offsets;
  bool rg = false;
  Index off = 0;
  for (const Tensor& t : xs) {
    offsets.push_back(off);
    const Index tc = t.cols();
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < tc; ++j) out[i * c + off + j] = t.data()[i * tc + j];
    off += tc;
    rg = rg || t.requires_grad();
  }
  std::vector<std::shared_ptr<TensorImpl>> impls;
  for (const Tensor& t : xs) impls.push_back(t.impl());
  return make_result(
      {r, c}, std::move(out), "concat_cols", impls,
      [impls, offsets, r, c](TensorImpl& o) {
        for (std::size_t t = 0; t < impls.size(); ++t) {
          auto& in = *impls[t];
          if (!in.requires_grad) continue;
          ensure_grad(in);
          const Index tc = static_cast<Index>(in.data.size()) / r;
          for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < tc; ++j) in.grad[i * tc + j] += o.grad[i * c + offsets[t] + j];
        }
      },
      rg);
}

Tensor concat_rows(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat_rows: empty input");
  const Index c = xs[0].cols();
  Index r = 0;
  bool rg = false;
  for (const Tensor& t : xs) {
    if (t.cols() != c) throw std::invalid_argument("concat_rows: column mismatch");
    r += t.rows();
    rg = rg || t.requires_grad();
  }
  std::vector<double> out;
  out.reserve(r * c);
  std::vector<Index> offsets;
  Index off = 0;
  for (const Tensor& t : xs) {
    offsets.push_back(off);
    out.insert(out.end(), t.data(), t.data() + t.numel());
    off += t.numel();
  }
  std::vector<std::shared_ptr<TensorImpl>> impls;
  for (const Tensor& t : xs) impls.push_back(t.impl());
  return make_result(
      {r, c}, std::move(out), "concat_rows", impls,
      [impls, offsets](TensorImpl& o) {
        for (std::size_t t = 0; t < impls.size(); ++t) {
          auto& in = *impls[t];
          if (!in.requires_grad) continue;
          ensure_grad(in);
          for (std::size_t i = 0; i < in.data.size(); ++i) in.grad[i] += o.grad[offsets[t] + i];
        }
      },
      rg);
}

Tensor slice_cols(const Tensor& x, Index c0, Index c1) {
  const Index r = x.rows(), c = x.cols();
  if (c0 < 0 || c1 > c || c0 >= c1) throw std::invalid_argument("slice_cols: bad range");
  const Index w = c1 - c0;
  std::vector<double> out(r * w);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < w; ++j) out[i * w + j] = x.data()[i * c + c0 + j];
  auto xi = x.impl();
  return make_result(
      {r, w}, std::move(out), "slice_cols", {xi},
      [xi, r, c, c0, w](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (Index i = 0; i < r; ++i)
          for (Index j = 0; j < w; ++j) xi->grad[i * c + c0 + j] += o.grad[i * w + j];
      },
      x.requires_grad());
}

Tensor reshape(const Tensor& x, Shape shape) {
  Index n = 1;
  for (Index d : shape) n *= d;
  if (n != x.numel()) throw std::invalid_argument("reshape: element count mismatch");
  std::vector<double> out(x.data(), x.data() + x.numel());
  auto xi = x.impl();
  return make_result(
      std::move(shape), std::move(out), "reshape", {xi},
      [xi](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        for (std::size_t i = 0; i < o.grad.size(); ++i) xi->grad[i] += o.grad[i];
      },
      x.requires_grad());
}

Tensor row_cumsum_exclusive(const Tensor& x) {
  const Index r = x.rows(), c = x.cols();
  std::vector<double> out(x.numel());
  for (Index i = 0; i < r; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < c; ++j) {
      out[i * c + j] = acc;
      acc += x.data()[i * c + j];
    }
  }
  auto xi = x.impl();
  return make_result(
      x.shape(), std::move(out), "row_cumsum_exclusive", {xi},
      [xi, r, c](TensorImpl& o) {
        if (!xi->requires_grad) return;
        ensure_grad(*xi);
        // d/dx[i,j] receives the grads of all strictly later columns.
        for (Index i = 0; i < r; ++i) {
          double acc = 0.0;
          for (Index j = c - 1; j >= 0; --j) {
            xi->grad[i * c + j] += acc;
            acc += o.grad[i * c + j];
          }
        }
      },
      x.requires_grad());
}

}  // namespace simnp::diff
