// The recurrent GLN block: eta (multi-kernel graph convolution), lambda
// (local context), gamma (global broadcast), alpha/rho (adjacency
// prediction), chained L times from (H0, A0).
#pragma once

#include <vector>

#include "gln/autodiff.hpp"
#include "gln/model.hpp"

namespace gln {

inline ADValue apply_activation(Tape& tape, ADValue x, Activation act) {
  switch (act) {
    case Activation::Sigmoid: return tape.sigmoid(x);
    case Activation::Tanh: return tape.tanh(x);
    case Activation::Identity: return x;
  }
  return x;
}

// Validates soft-adjacency preconditions: square, entries >= 0, symmetric to
// within tol. Asymmetry from float accumulation up to tol is tolerated (the
// caller symmetrizes); anything larger is a hard error.
inline void check_adjacency_value(const DenseMatrix& a, double tol = 1e-9) {
  if (a.rows() != a.cols())
    throw InvalidAdjacencyError("adjacency must be square, got " + a.shape());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) < 0.0)
        throw InvalidAdjacencyError("adjacency has negative entry at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      if (std::abs(a(i, j) - a(j, i)) > tol)
        throw InvalidAdjacencyError("adjacency asymmetric beyond tolerance at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

// tau(A) = Dhat^(-1/2) (A + I) Dhat^(-1/2) with Dhat = D + I, D = diag(row
// sums of A). Implemented as (r r^T) .* (A + I) where r = (rowsum + 1)^(-1/2),
// which keeps it differentiable with respect to A.
inline ADValue sym_normalize(Tape& tape, ADValue a) {
  check_adjacency_value(a.value());
  int n = a.rows();
  ADValue a_sym = tape.scale(tape.add(a, tape.transpose(a)), 0.5);
  ADValue ones_col = tape.constant(DenseMatrix::ones(n, 1));
  ADValue dhat = tape.add(tape.matmul(a_sym, ones_col), ones_col);  // rowsum + 1
  ADValue r = tape.rsqrt(dhat);
  ADValue scaling = tape.matmul(r, tape.transpose(r));
  ADValue a_hat = tape.add(a_sym, tape.constant(DenseMatrix::identity(n)));
  return tape.mul(scaling, a_hat);
}

inline DenseMatrix sym_normalize(const DenseMatrix& a) {
  Tape tape;
  return sym_normalize(tape, tape.constant(a)).value();
}

// Parameters of one layer bound onto a tape as leaves, in parameter_refs
// order per layer.
struct BoundLayer {
  std::vector<ADValue> W;
  ADValue U, Z, Q, M;
};

struct BoundModel {
  std::vector<BoundLayer> layers;

  // Flattened leaves in the canonical parameter order.
  std::vector<ADValue> leaves() const {
    std::vector<ADValue> out;
    for (const BoundLayer& l : layers) {
      for (const ADValue& w : l.W) out.push_back(w);
      out.push_back(l.U);
      out.push_back(l.Z);
      out.push_back(l.Q);
      out.push_back(l.M);
    }
    return out;
  }
};

inline BoundModel bind_model(Tape& tape, const GlnModel& model) {
  BoundModel bound;
  for (const GlnLayerParams& p : model.layers) {
    BoundLayer bl;
    for (const DenseMatrix& w : p.W) bl.W.push_back(tape.leaf(w));
    bl.U = tape.leaf(p.U);
    bl.Z = tape.leaf(p.Z);
    bl.Q = tape.leaf(p.Q);
    bl.M = tape.leaf(p.M);
    bound.layers.push_back(std::move(bl));
  }
  return bound;
}

// H_int = sum_i act(tau(A) H W_i); the activation sits inside the sum, one
// application per kernel.
inline ADValue intermediary_embedding(Tape& tape, ADValue h, ADValue a,
                                      const BoundLayer& layer,
                                      Activation act = Activation::Sigmoid) {
  ADValue tau = sym_normalize(tape, a);
  ADValue th = tape.matmul(tau, h);
  ADValue acc;
  for (const ADValue& w : layer.W) {
    ADValue term = apply_activation(tape, tape.matmul(th, w), act);
    acc = acc.valid() ? tape.add(acc, term) : term;
  }
  return acc;
}

// H_local = act(tau(A) H_int U)
inline ADValue local_context(Tape& tape, ADValue h_int, ADValue a, const BoundLayer& layer,
                             Activation act = Activation::Sigmoid) {
  ADValue tau = sym_normalize(tape, a);
  return apply_activation(tape, tape.matmul(tape.matmul(tau, h_int), layer.U), act);
}

// H_global = act(H_local Z); broadcast over the complete graph, so no tau.
inline ADValue global_context(Tape& tape, ADValue h_local, const BoundLayer& layer,
                              Activation act = Activation::Tanh) {
  return apply_activation(tape, tape.matmul(h_local, layer.Z), act);
}

// alpha = H_local Q H_global^T; S = M alpha M^T;
// A_next = act((S + S^T) / 2), exactly symmetric by construction.
inline ADValue predict_adjacency_from_global(Tape& tape, ADValue h_local, ADValue h_global,
                                             const BoundLayer& layer,
                                             Activation act = Activation::Sigmoid) {
  ADValue alpha = tape.matmul(tape.matmul(h_local, layer.Q), tape.transpose(h_global));
  ADValue s = tape.matmul(tape.matmul(layer.M, alpha), tape.transpose(layer.M));
  ADValue s_sym = tape.scale(tape.add(s, tape.transpose(s)), 0.5);
  return apply_activation(tape, s_sym, act);
}

inline ADValue predict_adjacency(Tape& tape, ADValue h_local, const BoundLayer& layer,
                                 Activation rho_act = Activation::Sigmoid,
                                 Activation gamma_act = Activation::Tanh) {
  ADValue h_global = global_context(tape, h_local, layer, gamma_act);
  return predict_adjacency_from_global(tape, h_local, h_global, layer, rho_act);
}

struct BlockOutput {
  ADValue H_int, H_local, H_global, A_next;
};

// One recurrent step: (H^(l), A^(l)) -> (H^(l+1) = H_local, A^(l+1)). Both
// tau applications use the incoming A^(l).
inline BlockOutput gln_block(Tape& tape, ADValue h, ADValue a, const BoundLayer& layer,
                             const ActivationSchedule& acts = {}) {
  BlockOutput out;
  out.H_int = intermediary_embedding(tape, h, a, layer, acts.eta);
  out.H_local = local_context(tape, out.H_int, a, layer, acts.lambda);
  out.H_global = global_context(tape, out.H_local, layer, acts.gamma);
  out.A_next = predict_adjacency_from_global(tape, out.H_local, out.H_global, layer, acts.rho);
  return out;
}

struct ForwardResult {
  std::vector<BlockOutput> blocks;
  ADValue H_final, A_final;
};

// The soft adjacency (raw sigmoid output) feeds the next step; binarization
// happens only at readout/metric time.
inline ForwardResult gln_forward(Tape& tape, const BoundModel& bound, ADValue h0, ADValue a0,
                                 const ActivationSchedule& acts = {}) {
  ForwardResult res;
  ADValue h = h0;
  ADValue a = a0;
  for (const BoundLayer& layer : bound.layers) {
    BlockOutput out = gln_block(tape, h, a, layer, acts);
    h = out.H_local;
    a = out.A_next;
    res.blocks.push_back(std::move(out));
  }
  res.H_final = h;
  res.A_final = a;
  return res;
}

// Plain-value convenience: run the model and return A^(L).
inline DenseMatrix gln_predict(const GlnModel& model, const DenseMatrix& features,
                               const DenseMatrix& a0) {
  if (features.rows() != model.n)
    throw DimensionError("gln_predict: features rows " + std::to_string(features.rows()) +
                         " != model n " + std::to_string(model.n));
  if (!model.dims.empty() && features.cols() != model.dims.front())
    throw DimensionError("gln_predict: feature dim " + std::to_string(features.cols()) +
                         " != model d0 " + std::to_string(model.dims.front()));
  Tape tape;
  BoundModel bound = bind_model(tape, model);
  ForwardResult res = gln_forward(tape, bound, tape.constant(features), tape.constant(a0),
                                  model.acts);
  return res.A_final.value();
}

// Entry 1 iff a(i,j) > epsilon, strict; diagonal forced to zero (self-loops
// are never edges).
inline DenseMatrix binarize(const DenseMatrix& a, double epsilon) {
  if (a.rows() != a.cols())
    throw DimensionError("binarize: adjacency must be square, got " + a.shape());
  DenseMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out(i, j) = (i != j && a(i, j) > epsilon) ? 1.0 : 0.0;
  return out;
}

}  // namespace gln
