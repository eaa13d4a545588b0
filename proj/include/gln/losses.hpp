// Learning objectives: class-balanced edge cross-entropy (HED form), dice
// structural loss, and their weighted sum with optional L2 regularization.
#pragma once

#include <string>

#include "gln/autodiff.hpp"
#include "gln/network.hpp"

namespace gln {

// paper_literal: the positive term is weighted by beta = |Y+|/|Y| as the
// text states. hed_standard swaps the weights so the rare class is
// up-weighted (the usual HED convention). At beta = 0.5 they coincide.
enum class BalanceMode { PaperLiteral, HedStandard };

inline std::string balance_mode_name(BalanceMode m) {
  return m == BalanceMode::PaperLiteral ? "paper_literal" : "hed_standard";
}

inline BalanceMode balance_mode_from_name(const std::string& s) {
  if (s == "paper_literal") return BalanceMode::PaperLiteral;
  if (s == "hed_standard") return BalanceMode::HedStandard;
  throw std::runtime_error("unknown balance_mode: " + s);
}

struct LossWeights {
  double psi1 = 1.0;
  double psi2 = 1.0;
  double weight_decay = 0.0;
  BalanceMode balance_mode = BalanceMode::PaperLiteral;
};

inline constexpr double kProbClamp = 1e-12;

inline void check_labels(const DenseMatrix& a_true) {
  if (a_true.rows() != a_true.cols())
    throw InvalidLabelError("labels must be square, got " + a_true.shape());
  for (int i = 0; i < a_true.rows(); ++i) {
    if (a_true(i, i) != 0.0)
      throw InvalidLabelError("labels must have zero diagonal");
    for (int j = 0; j < a_true.cols(); ++j) {
      double v = a_true(i, j);
      if (v != 0.0 && v != 1.0)
        throw InvalidLabelError("labels must be binary, got " + std::to_string(v) + " at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
      if (v != a_true(j, i)) throw InvalidLabelError("labels must be symmetric");
    }
  }
}

namespace detail {

struct PairMasks {
  DenseMatrix pos, neg;  // strictly upper triangle, split by label
  long long n_pos = 0, n_pairs = 0;
};

inline PairMasks pair_masks(const DenseMatrix& a_true) {
  int n = a_true.rows();
  PairMasks m{DenseMatrix(n, n), DenseMatrix(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++m.n_pairs;
      if (a_true(i, j) != 0.0) {
        m.pos(i, j) = 1.0;
        ++m.n_pos;
      } else {
        m.neg(i, j) = 1.0;
      }
    }
  }
  return m;
}

}  // namespace detail

// L_c over the n(n-1)/2 unordered node pairs. P(edge) = A_pred[i][j]; the
// no-edge class uses 1 - A_pred[i][j]. Probabilities are clamped to
// [1e-12, 1 - 1e-12] before the log.
inline ADValue edge_class_loss(Tape& tape, ADValue a_pred, const DenseMatrix& a_true,
                               BalanceMode mode = BalanceMode::PaperLiteral) {
  check_labels(a_true);
  check_same_shape("edge_class_loss", a_pred.value(), a_true);
  detail::PairMasks masks = detail::pair_masks(a_true);
  double beta = masks.n_pairs > 0 ? static_cast<double>(masks.n_pos) / masks.n_pairs : 0.0;
  double w_pos = mode == BalanceMode::PaperLiteral ? beta : 1.0 - beta;
  double w_neg = mode == BalanceMode::PaperLiteral ? 1.0 - beta : beta;

  ADValue p = tape.clamp(a_pred, kProbClamp, 1.0 - kProbClamp);
  ADValue one = tape.constant(DenseMatrix::ones(a_true.rows(), a_true.cols()));
  ADValue q = tape.clamp(tape.sub(one, a_pred), kProbClamp, 1.0 - kProbClamp);
  ADValue pos_term = tape.sum(tape.mul(tape.constant(masks.pos), tape.log(p)));
  ADValue neg_term = tape.sum(tape.mul(tape.constant(masks.neg), tape.log(q)));
  return tape.add(tape.scale(pos_term, -w_pos), tape.scale(neg_term, -w_neg));
}

inline double edge_class_loss_value(const DenseMatrix& a_pred, const DenseMatrix& a_true,
                                    BalanceMode mode = BalanceMode::PaperLiteral) {
  Tape tape;
  return edge_class_loss(tape, tape.constant(a_pred), a_true, mode).value()(0, 0);
}

// L_s = 1 - 2 sum(P .* T) / (sum(P.^2) + sum(T.^2)) over all n^2 entries.
inline ADValue dice_structural_loss(Tape& tape, ADValue a_pred, const DenseMatrix& a_true) {
  check_same_shape("dice_structural_loss", a_pred.value(), a_true);
  ADValue t = tape.constant(a_true);
  ADValue num = tape.scale(tape.sum(tape.mul(a_pred, t)), 2.0);
  ADValue denom = tape.add(tape.sum(tape.mul(a_pred, a_pred)), tape.sum(tape.mul(t, t)));
  ADValue one = tape.constant(DenseMatrix::ones(1, 1));
  return tape.sub(one, tape.div(num, denom));
}

// Empty-graph convention: both matrices identically zero gives 0, not 0/0.
inline double dice_structural_loss_value(const DenseMatrix& a_pred, const DenseMatrix& a_true) {
  check_same_shape("dice_structural_loss", a_pred, a_true);
  double denom = 0.0;
  for (size_t i = 0; i < a_pred.size(); ++i)
    denom += a_pred.data()[i] * a_pred.data()[i] + a_true.data()[i] * a_true.data()[i];
  if (denom == 0.0) return 0.0;
  Tape tape;
  return dice_structural_loss(tape, tape.constant(a_pred), a_true).value()(0, 0);
}

struct TotalLoss {
  ADValue total;
  ADValue edge_class;
  ADValue dice;
};

// L = psi1 L_c + psi2 L_s + weight_decay sum ||theta||^2, on A^(L) only.
inline TotalLoss total_loss(Tape& tape, ADValue a_final, const DenseMatrix& a_true,
                            const BoundModel& bound, const LossWeights& weights) {
  TotalLoss out;
  out.edge_class = edge_class_loss(tape, a_final, a_true, weights.balance_mode);
  out.dice = dice_structural_loss(tape, a_final, a_true);
  out.total = tape.add(tape.scale(out.edge_class, weights.psi1),
                       tape.scale(out.dice, weights.psi2));
  if (weights.weight_decay > 0.0) {
    ADValue reg;
    for (const ADValue& theta : bound.leaves()) {
      ADValue sq = tape.sum(tape.mul(theta, theta));
      reg = reg.valid() ? tape.add(reg, sq) : sq;
    }
    if (reg.valid()) out.total = tape.add(out.total, tape.scale(reg, weights.weight_decay));
  }
  return out;
}

}  // namespace gln
