#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "simnp/diff/adam.hpp"
#include "simnp/diff/mlp.hpp"
#include "simnp/diff/ops.hpp"
#include "simnp/diff/tensor.hpp"
#include "testutil.hpp"

using namespace simnp;
using namespace simnp::diff;

TEST_CASE("row softmax basics") {
  Tensor x = Tensor::from_data({1, 2}, {0.0, 0.0});
  Tensor y = row_softmax(x);
  CHECK(y.data()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(y.data()[1] == doctest::Approx(0.5).epsilon(1e-15));

  // rows sum to 1 within 1e-12 for random inputs, including large scores
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Index r = 1 + rng.uniform_int(6), c = 1 + rng.uniform_int(9);
    Tensor a = Tensor::randn({r, c}, 50.0, rng);
    Tensor s = row_softmax(a);
    for (Index i = 0; i < r; ++i) {
      double total = 0.0;
      for (Index j = 0; j < c; ++j) total += s.at(i, j);
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("tanh(0) = 0") {
  Tensor y = tanh(Tensor::scalar(0.0));
  CHECK(y.item() == 0.0);
}

TEST_CASE("matmul matches naive triple-loop oracle") {
  Rng rng(3);
  Tensor a = Tensor::randn({3, 4}, 1.0, rng);
  Tensor b = Tensor::randn({4, 2}, 1.0, rng);
  Tensor c = matmul(a, b);
  std::vector<double> av(a.data(), a.data() + a.numel());
  std::vector<double> bv(b.data(), b.data() + b.numel());
  auto want = testutil::naive_matmul(av, bv, 3, 4, 2);
  for (Index i = 0; i < c.numel(); ++i) CHECK(std::abs(c.data()[i] - want[i]) < 1e-12);
}

TEST_CASE("backward of sum is all ones") {
  Tensor x = Tensor::from_data({3}, {1.0, -2.0, 5.0}, true);
  Tape tape;
  {
    TapeScope scope(tape);
    Tensor loss = sum(x);
    tape.backward(loss);
  }
  for (double g : x.grad()) CHECK(g == 1.0);
}

TEST_CASE("backward of l2 norm is the unit vector") {
  Tensor x = Tensor::from_data({2}, {3.0, 4.0}, true);
  Tape tape;
  {
    TapeScope scope(tape);
    Tensor loss = l2_norm(x);
    tape.backward(loss);
  }
  CHECK(x.grad()[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(x.grad()[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("random five-op composite matches finite differences") {
  Rng rng(11);
  Tensor x = Tensor::randn({4, 3}, 0.4, rng, true);
  Tensor w = Tensor::randn({3, 5}, 0.4, rng);

  auto eval = [&]() {
    Tensor h = matmul(x, w);
    h = tanh(h);
    h = scale(h, 0.7);
    Tensor s = exp(h);
    return mean(s).item();
  };

  Tape tape;
  {
    TapeScope scope(tape);
    Tensor h = matmul(x, w);
    h = tanh(h);
    h = scale(h, 0.7);
    Tensor s = exp(h);
    tape.backward(mean(s));
  }
  CHECK(testutil::fd_max_rel_err(eval, x, x.grad(), 1e-5) < 1e-6);
}

TEST_CASE("every primitive matches finite differences over random values") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index r = 2 + rng.uniform_int(4);
    const Index c = 2 + rng.uniform_int(4);
    Tensor x = Tensor::randn({r, c}, 0.8, rng, true);
    Tensor y = Tensor::randn({r, c}, 0.8, rng, true);
    Tensor wsum = Tensor::randn({r, c}, 1.0, rng);  // fixed mixing weights

    // indices for gather/scatter/segment ops
    std::vector<Index> gidx(r + 1);
    for (auto& v : gidx) v = rng.uniform_int(r);
    std::vector<Index> seg(r);
    for (Index i = 0; i < r; ++i) seg[i] = i / 2;
    const Index nseg = (r + 1) / 2;

    const int which = trial % 16;
    auto build = [&]() -> Tensor {
      switch (which) {
        case 0: return mul(x, y);
        case 1: return add(x, y);
        case 2: return sub(x, y);
        case 3: return exp(scale(x, 0.5));
        case 4: return tanh(x);
        case 5: return leaky_relu(x, 0.1);
        case 6: return sigmoid(x);
        case 7: return softplus(x);
        case 8: return reciprocal(add(mul(x, x), Tensor::full({r, c}, 1.0)));
        case 9: return row_softmax(x);
        case 10: return row_l2norm(x);
        case 11: return gather_rows(x, gidx);
        case 12: return segment_sum(x, seg, nseg);
        case 13: return matmul(x, transpose(y));
        case 14: return row_cumsum_exclusive(x);
        default: return concat_cols({x, mul_colvec(y, slice_cols(x, 0, 1))});
      }
    };
    auto eval = [&]() {
      Tensor out = build();
      // project through fixed weights so every output element matters
      double acc = 0.0;
      for (Index i = 0; i < out.numel(); ++i)
        acc += out.data()[i] * wsum.data()[i % wsum.numel()];
      return acc / static_cast<double>(out.numel());
    };

    Tape tape;
    Tensor loss;
    {
      TapeScope scope(tape);
      Tensor out = build();
      std::vector<double> mix(out.numel());
      for (Index i = 0; i < out.numel(); ++i) mix[i] = wsum.data()[i % wsum.numel()];
      Tensor m = mul(out, Tensor::from_data(out.shape(), std::move(mix)));
      loss = scale(sum(m), 1.0 / static_cast<double>(out.numel()));
      tape.backward(loss);
    }
    worst = std::max(worst, testutil::fd_max_rel_err(eval, x, x.grad(), 1e-5));
    worst = std::max(worst, testutil::fd_max_rel_err(eval, y, y.grad(), 1e-5));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("replaying a tape twice yields bit-identical gradients") {
  Rng rng(5);
  Tensor x = Tensor::randn({6, 4}, 1.0, rng, true);
  Tensor w = Tensor::randn({4, 4}, 1.0, rng, true);
  Tape tape;
  Tensor loss;
  {
    TapeScope scope(tape);
    loss = mse(row_softmax(matmul(tanh(x), w)), Tensor::full({6, 4}, 0.25));
    tape.backward(loss);
  }
  std::vector<double> gx(x.grad().begin(), x.grad().end());
  std::vector<double> gw(w.grad().begin(), w.grad().end());
  tape.backward(loss);
  for (Index i = 0; i < x.numel(); ++i) CHECK(x.grad()[i] == gx[i]);
  for (Index i = 0; i < w.numel(); ++i) CHECK(w.grad()[i] == gw[i]);
}

TEST_CASE("disconnected leaf gets zero gradient") {
  Tensor x = Tensor::from_data({2}, {1.0, 2.0}, true);
  Tensor z = Tensor::from_data({2}, {3.0, 4.0}, true);
  Tape tape;
  {
    TapeScope scope(tape);
    tape.backward(sum(x));
  }
  for (double g : z.grad()) CHECK(g == 0.0);
}

TEST_CASE("non-finite forward output is an error") {
  Tensor x = Tensor::from_data({1}, {0.0});
  CHECK_THROWS(reciprocal(x));
  CHECK_THROWS(log(x));
}

TEST_CASE("shape mismatch is an error") {
  Tensor a = Tensor::zeros({2, 3});
  Tensor b = Tensor::zeros({3, 2});
  CHECK_THROWS(add(a, b));
  CHECK_THROWS(matmul(a, a));
}

TEST_CASE("backward requires scalar loss") {
  Tensor x = Tensor::from_data({2}, {1.0, 2.0}, true);
  Tape tape;
  TapeScope scope(tape);
  Tensor y = mul(x, x);
  CHECK_THROWS(tape.backward(y));
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  std::vector<double> p{1.0, -2.0, 3.0};
  std::vector<double> g{0.0, 0.0, 0.0};
  AdamState st;
  adam_step(p, g, st, {.lr = 0.1});
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
  CHECK(p[2] == 3.0);
}

TEST_CASE("adam: bias-corrected first step moves by about lr") {
  std::vector<double> p{0.0};
  std::vector<double> g{1.0};
  AdamState st;
  adam_step(p, g, st, {.lr = 0.1});
  CHECK(p[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam: 100 steps on x^2 converges near zero") {
  std::vector<double> p{1.0};
  AdamState st;
  AdamConfig cfg{.lr = 0.1};
  for (int t = 0; t < 100; ++t) {
    std::vector<double> g{2.0 * p[0]};
    adam_step(p, g, st, cfg);
  }
  CHECK(std::abs(p[0]) < 1e-2);
}

TEST_CASE("f32 precision mode rounds stored values through float") {
  set_default_precision(Precision::f32);
  Tensor x = Tensor::from_data({1}, {1.0});
  Tensor y = scale(x, 1.0 / 3.0);
  CHECK(y.data()[0] == static_cast<double>(static_cast<float>(y.data()[0])));
  set_default_precision(Precision::f64);
}

TEST_CASE("mlp forward works and is differentiable") {
  Rng rng(13);
  Mlp mlp = Mlp::create({3, 8, 2}, Activation::leaky_relu, rng);
  Tensor x = Tensor::randn({5, 3}, 1.0, rng, true);
  auto eval = [&]() { return mean(mlp.forward(x)).item(); };
  Tape tape;
  {
    TapeScope scope(tape);
    tape.backward(mean(mlp.forward(x)));
  }
  CHECK(testutil::fd_max_rel_err(eval, x, x.grad(), 1e-6) < 1e-5);
  CHECK(testutil::fd_max_rel_err(eval, mlp.weights[0], mlp.weights[0].grad(), 1e-6) < 1e-5);
}
