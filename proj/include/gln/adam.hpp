// ADAM with bias correction. Moments live in AdamState, one slot per
// parameter matrix, keyed by the canonical parameter order.
#pragma once

#include <cmath>
#include <vector>

#include "gln/matrix.hpp"

namespace gln {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;

  explicit AdamState(const std::vector<const DenseMatrix*>& params) {
    for (const DenseMatrix* p : params) {
      m_.emplace_back(p->rows(), p->cols());
      v_.emplace_back(p->rows(), p->cols());
    }
  }

  long long step_count() const { return t_; }
  const DenseMatrix& first_moment(size_t i) const { return m_[i]; }
  const DenseMatrix& second_moment(size_t i) const { return v_[i]; }

  // theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
  void step(std::vector<DenseMatrix*>& params, const std::vector<DenseMatrix>& grads,
            const AdamConfig& cfg) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw ContractError("adam_step: parameter/gradient count mismatch");
    ++t_;
    double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
    for (size_t p = 0; p < params.size(); ++p) {
      DenseMatrix& theta = *params[p];
      const DenseMatrix& g = grads[p];
      check_same_shape("adam_step", theta, g);
      for (size_t i = 0; i < theta.size(); ++i) {
        double gi = g.data()[i];
        double& m = m_[p].data()[i];
        double& v = v_[p].data()[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * gi;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * gi * gi;
        double m_hat = m / bc1;
        double v_hat = v / bc2;
        theta.data()[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
      }
    }
  }

 private:
  std::vector<DenseMatrix> m_, v_;
  long long t_ = 0;
};

inline void adam_step(std::vector<DenseMatrix*>& params, const std::vector<DenseMatrix>& grads,
                      AdamState& state, const AdamConfig& cfg) {
  state.step(params, grads, cfg);
}

}  // namespace gln
