// Reverse-mode automatic differentiation over DenseMatrix. A Tape records
// matrix-level primitives in evaluation order (define-by-run, rebuilt per
// forward pass); backward() walks the records once in reverse.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gln/matrix.hpp"

namespace gln {

class Tape;

// Handle into a tape node. Cheap to copy; invalid when default-constructed.
class ADValue {
 public:
  ADValue() = default;
  bool valid() const { return tape_ != nullptr; }
  const DenseMatrix& value() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
  int node() const { return node_; }
  Tape* tape() const { return tape_; }

 private:
  friend class Tape;
  ADValue(Tape* t, int n) : tape_(t), node_(n) {}
  Tape* tape_ = nullptr;
  int node_ = -1;
};

// Adjoints of every node reachable from the backward root. Leaves that were
// never touched report a zero gradient of their own shape.
class Gradients {
 public:
  const DenseMatrix& at(const ADValue& v) const { return adjoints_[v.node()]; }

 private:
  friend class Tape;
  std::vector<DenseMatrix> adjoints_;
};

class Tape {
  enum class Op {
    Leaf,
    MatMul,
    Transpose,
    Add,
    Sub,
    Mul,
    Div,
    Scale,
    Sigmoid,
    Tanh,
    Log,
    Clamp,
    Rsqrt,
    Sum,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double c0 = 0.0;  // scale factor / clamp lo
    double c1 = 0.0;  // clamp hi
    DenseMatrix value;
  };

 public:
  ADValue leaf(DenseMatrix v) { return push(Op::Leaf, -1, -1, std::move(v)); }

  // Same mechanics as leaf; the distinct name marks inputs that are not
  // trained (gradients are still available, e.g. for d loss / d A0).
  ADValue constant(DenseMatrix v) { return push(Op::Leaf, -1, -1, std::move(v)); }

  ADValue matmul(ADValue a, ADValue b) {
    return push(Op::MatMul, a.node(), b.node(), gln::matmul(val(a), val(b)));
  }

  ADValue transpose(ADValue a) {
    return push(Op::Transpose, a.node(), -1, gln::transpose(val(a)));
  }

  ADValue add(ADValue a, ADValue b) {
    return push(Op::Add, a.node(), b.node(), gln::add(val(a), val(b)));
  }

  ADValue sub(ADValue a, ADValue b) {
    return push(Op::Sub, a.node(), b.node(), gln::sub(val(a), val(b)));
  }

  ADValue mul(ADValue a, ADValue b) {
    return push(Op::Mul, a.node(), b.node(), gln::hadamard(val(a), val(b)));
  }

  ADValue div(ADValue a, ADValue b) {
    check_same_shape("div", val(a), val(b));
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] /= val(b).data()[i];
    return push(Op::Div, a.node(), b.node(), std::move(c));
  }

  ADValue scale(ADValue a, double s) {
    return push(Op::Scale, a.node(), -1, gln::scale(val(a), s), s);
  }

  ADValue sigmoid(ADValue a) {
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] = sigmoid_scalar(c.data()[i]);
    return push(Op::Sigmoid, a.node(), -1, std::move(c));
  }

  ADValue tanh(ADValue a) {
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] = std::tanh(c.data()[i]);
    return push(Op::Tanh, a.node(), -1, std::move(c));
  }

  ADValue log(ADValue a) {
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] = std::log(c.data()[i]);
    return push(Op::Log, a.node(), -1, std::move(c));
  }

  // gradient passes through inside [lo, hi] (inclusive), zero outside
  ADValue clamp(ADValue a, double lo, double hi) {
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] = std::min(hi, std::max(lo, c.data()[i]));
    return push(Op::Clamp, a.node(), -1, std::move(c), lo, hi);
  }

  // x^(-1/2), entrywise
  ADValue rsqrt(ADValue a) {
    DenseMatrix c = val(a);
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] = 1.0 / std::sqrt(c.data()[i]);
    return push(Op::Rsqrt, a.node(), -1, std::move(c));
  }

  // reduce to 1x1
  ADValue sum(ADValue a) {
    DenseMatrix c(1, 1);
    c(0, 0) = gln::sum(val(a));
    return push(Op::Sum, a.node(), -1, std::move(c));
  }

  const DenseMatrix& value(const ADValue& v) const { return nodes_[v.node()].value; }

  size_t size() const { return nodes_.size(); }

  // Reverse sweep from a scalar root. Multiple uses of a node accumulate
  // additively into its adjoint.
  Gradients backward(ADValue root) const {
    const DenseMatrix& rv = nodes_[root.node()].value;
    if (rv.rows() != 1 || rv.cols() != 1)
      throw ContractError("backward: root must be a 1x1 scalar, got " + rv.shape());

    Gradients g;
    g.adjoints_.reserve(nodes_.size());
    for (const Node& n : nodes_) g.adjoints_.emplace_back(n.value.rows(), n.value.cols());
    auto& adj = g.adjoints_;
    adj[root.node()](0, 0) = 1.0;

    for (int i = root.node(); i >= 0; --i) {
      const Node& n = nodes_[i];
      const DenseMatrix& gi = adj[i];
      switch (n.op) {
        case Op::Leaf:
          break;
        case Op::MatMul:
          accumulate(adj[n.a], matmul_nt(gi, nodes_[n.b].value));
          accumulate(adj[n.b], matmul_tn(nodes_[n.a].value, gi));
          break;
        case Op::Transpose:
          accumulate(adj[n.a], gln::transpose(gi));
          break;
        case Op::Add:
          accumulate(adj[n.a], gi);
          accumulate(adj[n.b], gi);
          break;
        case Op::Sub:
          accumulate(adj[n.a], gi);
          accumulate_scaled(adj[n.b], gi, -1.0);
          break;
        case Op::Mul:
          accumulate(adj[n.a], gln::hadamard(gi, nodes_[n.b].value));
          accumulate(adj[n.b], gln::hadamard(gi, nodes_[n.a].value));
          break;
        case Op::Div: {
          const DenseMatrix& av = nodes_[n.a].value;
          const DenseMatrix& bv = nodes_[n.b].value;
          for (size_t t = 0; t < gi.size(); ++t) {
            double inv_b = 1.0 / bv.data()[t];
            adj[n.a].data()[t] += gi.data()[t] * inv_b;
            adj[n.b].data()[t] -= gi.data()[t] * av.data()[t] * inv_b * inv_b;
          }
          break;
        }
        case Op::Scale:
          accumulate_scaled(adj[n.a], gi, n.c0);
          break;
        case Op::Sigmoid:
          for (size_t t = 0; t < gi.size(); ++t) {
            double s = n.value.data()[t];
            adj[n.a].data()[t] += gi.data()[t] * s * (1.0 - s);
          }
          break;
        case Op::Tanh:
          for (size_t t = 0; t < gi.size(); ++t) {
            double y = n.value.data()[t];
            adj[n.a].data()[t] += gi.data()[t] * (1.0 - y * y);
          }
          break;
        case Op::Log:
          for (size_t t = 0; t < gi.size(); ++t)
            adj[n.a].data()[t] += gi.data()[t] / nodes_[n.a].value.data()[t];
          break;
        case Op::Clamp:
          for (size_t t = 0; t < gi.size(); ++t) {
            double x = nodes_[n.a].value.data()[t];
            if (x >= n.c0 && x <= n.c1) adj[n.a].data()[t] += gi.data()[t];
          }
          break;
        case Op::Rsqrt:
          for (size_t t = 0; t < gi.size(); ++t) {
            double y = n.value.data()[t];  // x^(-1/2); derivative = -y^3 / 2
            adj[n.a].data()[t] += gi.data()[t] * (-0.5 * y * y * y);
          }
          break;
        case Op::Sum: {
          double g0 = gi(0, 0);
          for (size_t t = 0; t < adj[n.a].size(); ++t) adj[n.a].data()[t] += g0;
          break;
        }
      }
    }
    return g;
  }

 private:
  friend class ADValue;

  const DenseMatrix& val(const ADValue& v) const { return nodes_[v.node()].value; }

  ADValue push(Op op, int a, int b, DenseMatrix value, double c0 = 0.0, double c1 = 0.0) {
    Node n;
    n.op = op;
    n.a = a;
    n.b = b;
    n.c0 = c0;
    n.c1 = c1;
    n.value = std::move(value);
    nodes_.push_back(std::move(n));
    return ADValue(this, static_cast<int>(nodes_.size()) - 1);
  }

  static void accumulate(DenseMatrix& into, const DenseMatrix& g) {
    for (size_t t = 0; t < into.size(); ++t) into.data()[t] += g.data()[t];
  }

  static void accumulate_scaled(DenseMatrix& into, const DenseMatrix& g, double s) {
    for (size_t t = 0; t < into.size(); ++t) into.data()[t] += s * g.data()[t];
  }

  std::vector<Node> nodes_;
};

inline const DenseMatrix& ADValue::value() const { return tape_->value(*this); }

}  // namespace gln
