#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gln/autodiff.hpp"
#include "gln/matrix.hpp"
#include "gln/rng.hpp"
#include "oracles.hpp"

using gln::ADValue;
using gln::DenseMatrix;
using gln::Tape;

namespace {

DenseMatrix random_matrix(int r, int c, gln::Rng& rng, double lo = -1.0, double hi = 1.0) {
  DenseMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

// central finite differences of a scalar-valued tape program w.r.t. one leaf
DenseMatrix fd_gradient(const std::function<double(const DenseMatrix&)>& f, DenseMatrix x,
                        double h = 1e-6) {
  DenseMatrix g(x.rows(), x.cols());
  for (size_t i = 0; i < x.size(); ++i) {
    double saved = x.data()[i];
    x.data()[i] = saved + h;
    double up = f(x);
    x.data()[i] = saved - h;
    double down = f(x);
    x.data()[i] = saved;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double worst_rel_err(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, oracle::scale_normalized_error(a.data()[i], b.data()[i]));
  return worst;
}

}  // namespace

TEST_CASE("DenseMatrix invariants") {
  DenseMatrix m(2, 3, 1.5);
  CHECK(m.size() == 6);
  CHECK_THROWS_AS(DenseMatrix(0, 3), gln::DimensionError);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1.0}), gln::DimensionError);
  DenseMatrix id = DenseMatrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
}

TEST_CASE("matmul forward examples") {
  Tape tape;
  ADValue id = tape.constant(DenseMatrix::identity(2));
  ADValue b = tape.constant({{3, 4}, {5, 6}});
  CHECK(tape.matmul(id, b).value() == DenseMatrix{{3, 4}, {5, 6}});

  ADValue row = tape.constant({{1, 2}});
  ADValue col = tape.constant({{3}, {4}});
  CHECK(tape.matmul(row, col).value() == DenseMatrix{{11}});
}

TEST_CASE("matmul shape error names both shapes") {
  Tape tape;
  ADValue a = tape.constant(DenseMatrix(3, 4, 1.0));
  ADValue b = tape.constant(DenseMatrix(3, 2, 1.0));
  CHECK_THROWS_WITH(tape.matmul(a, b),
                    Catch::Matchers::ContainsSubstring("3x4") &&
                        Catch::Matchers::ContainsSubstring("3x2"));
}

TEST_CASE("matmul gradient of sum equals ones * b^T and matches FD") {
  gln::Rng rng(7);
  DenseMatrix a = random_matrix(3, 4, rng);
  DenseMatrix b = random_matrix(4, 2, rng);

  Tape tape;
  ADValue av = tape.leaf(a);
  ADValue bv = tape.leaf(b);
  ADValue root = tape.sum(tape.matmul(av, bv));
  gln::Gradients grads = tape.backward(root);

  DenseMatrix expected = gln::matmul(DenseMatrix::ones(3, 2), gln::transpose(b));
  CHECK(gln::max_abs_diff(grads.at(av), expected) < 1e-14);

  auto f = [&](const DenseMatrix& x) {
    Tape t;
    return t.sum(t.matmul(t.leaf(x), t.constant(b))).value()(0, 0);
  };
  CHECK(worst_rel_err(grads.at(av), fd_gradient(f, a)) < 1e-4);
}

TEST_CASE("elementwise forward values") {
  Tape tape;
  ADValue z = tape.constant(DenseMatrix(1, 1, 0.0));
  CHECK(tape.sigmoid(z).value()(0, 0) == 0.5);
  CHECK(tape.tanh(z).value()(0, 0) == 0.0);

  ADValue big = tape.constant(DenseMatrix(1, 1, -800.0));
  CHECK(std::isfinite(tape.sigmoid(big).value()(0, 0)));
  ADValue bigp = tape.constant(DenseMatrix(1, 1, 800.0));
  CHECK(tape.sigmoid(bigp).value()(0, 0) == 1.0);
}

TEST_CASE("sigmoid gradient at x=1") {
  Tape tape;
  ADValue x = tape.leaf(DenseMatrix(1, 1, 1.0));
  gln::Gradients g = tape.backward(tape.sum(tape.sigmoid(x)));
  double s = gln::sigmoid_scalar(1.0);
  CHECK(g.at(x)(0, 0) == Catch::Approx(s * (1.0 - s)).epsilon(1e-12));
  CHECK(g.at(x)(0, 0) == Catch::Approx(0.19661193).epsilon(1e-7));

  auto f = [&](const DenseMatrix& v) {
    Tape t;
    return t.sum(t.sigmoid(t.leaf(v))).value()(0, 0);
  };
  CHECK(worst_rel_err(g.at(x), fd_gradient(f, DenseMatrix(1, 1, 1.0))) < 1e-4);
}

TEST_CASE("binary elementwise shape mismatch") {
  Tape tape;
  ADValue a = tape.constant(DenseMatrix(2, 2, 1.0));
  ADValue b = tape.constant(DenseMatrix(2, 3, 1.0));
  CHECK_THROWS_AS(tape.add(a, b), gln::DimensionError);
  CHECK_THROWS_AS(tape.mul(a, b), gln::DimensionError);
}

TEST_CASE("transpose examples and involution") {
  Tape tape;
  ADValue a = tape.constant({{1, 2}, {3, 4}});
  CHECK(tape.transpose(a).value() == DenseMatrix{{1, 3}, {2, 4}});

  gln::Rng rng(3);
  DenseMatrix r = random_matrix(3, 5, rng);
  Tape t2;
  ADValue rv = t2.constant(r);
  CHECK(t2.transpose(t2.transpose(rv)).value() == r);
}

TEST_CASE("transpose gradient via sum(a^T m) matches FD") {
  gln::Rng rng(11);
  DenseMatrix a = random_matrix(2, 3, rng);
  DenseMatrix m = random_matrix(2, 4, rng);

  Tape tape;
  ADValue av = tape.leaf(a);
  ADValue root = tape.sum(tape.matmul(tape.transpose(av), tape.constant(m)));
  gln::Gradients g = tape.backward(root);

  auto f = [&](const DenseMatrix& x) {
    Tape t;
    return t.sum(t.matmul(t.transpose(t.leaf(x)), t.constant(m))).value()(0, 0);
  };
  CHECK(worst_rel_err(g.at(av), fd_gradient(f, a)) < 1e-4);
}

TEST_CASE("backward root must be scalar") {
  Tape tape;
  ADValue a = tape.leaf(DenseMatrix(2, 2, 1.0));
  CHECK_THROWS_AS(tape.backward(a), gln::ContractError);
}

TEST_CASE("backward of plain sum is all ones") {
  Tape tape;
  ADValue x = tape.leaf(DenseMatrix(3, 2, 0.25));
  gln::Gradients g = tape.backward(tape.sum(x));
  CHECK(gln::max_abs_diff(g.at(x), DenseMatrix::ones(3, 2)) == 0.0);
}

TEST_CASE("backward of sum(sigmoid(x)) is s(1-s)") {
  gln::Rng rng(5);
  DenseMatrix x = random_matrix(2, 3, rng, -2.0, 2.0);
  Tape tape;
  ADValue xv = tape.leaf(x);
  gln::Gradients g = tape.backward(tape.sum(tape.sigmoid(xv)));
  for (size_t i = 0; i < x.size(); ++i) {
    double s = gln::sigmoid_scalar(x.data()[i]);
    CHECK(g.at(xv).data()[i] == Catch::Approx(s * (1 - s)).epsilon(1e-12));
  }
}

TEST_CASE("two paths accumulate additively") {
  DenseMatrix x0(1, 1, 0.7);
  Tape tape;
  ADValue x = tape.leaf(x0);
  // root = sum(x*x + 3x); gradient = 2x + 3
  ADValue root = tape.sum(tape.add(tape.mul(x, x), tape.scale(x, 3.0)));
  gln::Gradients g = tape.backward(root);
  CHECK(g.at(x)(0, 0) == Catch::Approx(2 * 0.7 + 3));

  // equal to the sum of the two single-path gradients
  Tape t1;
  ADValue x1 = t1.leaf(x0);
  double g1 = t1.backward(t1.sum(t1.mul(x1, x1))).at(x1)(0, 0);
  Tape t2;
  ADValue x2 = t2.leaf(x0);
  double g2 = t2.backward(t2.sum(t2.scale(x2, 3.0))).at(x2)(0, 0);
  CHECK(g.at(x)(0, 0) == g1 + g2);
}

TEST_CASE("extension ops match finite differences") {
  gln::Rng rng(13);

  SECTION("log . clamp") {
    DenseMatrix x = random_matrix(2, 2, rng, 0.1, 0.9);
    Tape tape;
    ADValue xv = tape.leaf(x);
    gln::Gradients g = tape.backward(tape.sum(tape.log(tape.clamp(xv, 1e-12, 1 - 1e-12))));
    auto f = [](const DenseMatrix& v) {
      Tape t;
      ADValue lv = t.leaf(v);
      return t.sum(t.log(t.clamp(lv, 1e-12, 1 - 1e-12))).value()(0, 0);
    };
    CHECK(worst_rel_err(g.at(xv), fd_gradient(f, x)) < 1e-4);
  }

  SECTION("clamp blocks gradient outside range") {
    Tape tape;
    ADValue xv = tape.leaf(DenseMatrix(1, 1, 2.0));
    gln::Gradients g = tape.backward(tape.sum(tape.clamp(xv, 0.0, 1.0)));
    CHECK(g.at(xv)(0, 0) == 0.0);
  }

  SECTION("rsqrt") {
    DenseMatrix x = random_matrix(2, 2, rng, 1.0, 5.0);
    Tape tape;
    ADValue xv = tape.leaf(x);
    gln::Gradients g = tape.backward(tape.sum(tape.rsqrt(xv)));
    auto f = [](const DenseMatrix& v) {
      Tape t;
      return t.sum(t.rsqrt(t.leaf(v))).value()(0, 0);
    };
    CHECK(worst_rel_err(g.at(xv), fd_gradient(f, x)) < 1e-4);
  }

  SECTION("div") {
    DenseMatrix a = random_matrix(2, 2, rng, 0.5, 2.0);
    DenseMatrix b = random_matrix(2, 2, rng, 0.5, 2.0);
    Tape tape;
    ADValue av = tape.leaf(a);
    ADValue bv = tape.leaf(b);
    gln::Gradients g = tape.backward(tape.sum(tape.div(av, bv)));
    auto fa = [&](const DenseMatrix& v) {
      Tape t;
      return t.sum(t.div(t.leaf(v), t.constant(b))).value()(0, 0);
    };
    auto fb = [&](const DenseMatrix& v) {
      Tape t;
      return t.sum(t.div(t.constant(a), t.leaf(v))).value()(0, 0);
    };
    CHECK(worst_rel_err(g.at(av), fd_gradient(fa, a)) < 1e-4);
    CHECK(worst_rel_err(g.at(bv), fd_gradient(fb, b)) < 1e-4);
  }

  SECTION("sub and scale") {
    DenseMatrix a = random_matrix(3, 2, rng);
    DenseMatrix b = random_matrix(3, 2, rng);
    Tape tape;
    ADValue av = tape.leaf(a);
    ADValue bv = tape.leaf(b);
    gln::Gradients g = tape.backward(tape.sum(tape.scale(tape.sub(av, bv), 2.5)));
    CHECK(gln::max_abs_diff(g.at(av), DenseMatrix(3, 2, 2.5)) < 1e-14);
    CHECK(gln::max_abs_diff(g.at(bv), DenseMatrix(3, 2, -2.5)) < 1e-14);
  }
}

TEST_CASE("identical inputs give bit-identical outputs and gradients") {
  auto run = [] {
    gln::Rng rng(42);
    DenseMatrix a = random_matrix(4, 4, rng);
    Tape tape;
    ADValue av = tape.leaf(a);
    ADValue root = tape.sum(tape.sigmoid(tape.matmul(av, tape.transpose(av))));
    gln::Gradients g = tape.backward(root);
    return std::pair{root.value()(0, 0), g.at(av)};
  };
  auto [v1, g1] = run();
  auto [v2, g2] = run();
  CHECK(v1 == v2);
  CHECK(g1 == g2);
}
