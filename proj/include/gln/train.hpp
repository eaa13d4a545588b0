// Per-sample gradient descent over a family of graphs: forward from
// (H0 = features, A0 = I), combined loss on A^(L), backward, ADAM update.
#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gln/adam.hpp"
#include "gln/graph.hpp"
#include "gln/losses.hpp"
#include "gln/network.hpp"
#include "gln/rng.hpp"

namespace gln {

class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

struct TrainConfig {
  int epochs = 150;
  AdamConfig adam;
  LossWeights weights;
  uint64_t shuffle_seed = 0;
};

struct EpochTrace {
  double mean_total = 0.0;
  double mean_edge_class = 0.0;
  double mean_dice = 0.0;
};

struct TrainResult {
  std::vector<EpochTrace> trace;
};

// Sample order is reshuffled each epoch from shuffle_seed; batch size is one
// sample (graphs in different families have different n anyway).
inline TrainResult train(GlnModel& model, const std::vector<GraphSample>& samples,
                         const TrainConfig& cfg) {
  model.validate();
  for (const GraphSample& s : samples) {
    if (s.n() != model.n)
      throw TrainingError("train: sample node count " + std::to_string(s.n()) +
                          " != model n " + std::to_string(model.n));
    if (s.feature_dim() != model.dims.front())
      throw TrainingError("train: sample feature dim " + std::to_string(s.feature_dim()) +
                          " != model d0 " + std::to_string(model.dims.front()));
  }

  TrainResult result;
  if (samples.empty() || cfg.epochs <= 0) return result;

  std::vector<DenseMatrix*> params = parameter_refs(model);
  AdamState adam(std::vector<const DenseMatrix*>(params.begin(), params.end()));
  Rng shuffle_rng(cfg.shuffle_seed);
  DenseMatrix a0 = DenseMatrix::identity(model.n);

  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochTrace trace;
    for (size_t idx : order) {
      const GraphSample& sample = samples[idx];
      Tape tape;
      BoundModel bound = bind_model(tape, model);
      ForwardResult fwd = gln_forward(tape, bound, tape.constant(sample.features),
                                      tape.constant(a0), model.acts);
      TotalLoss loss = total_loss(tape, fwd.A_final, sample.adjacency, bound, cfg.weights);
      double total = loss.total.value()(0, 0);
      if (!std::isfinite(total))
        throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) +
                            ", sample " + std::to_string(idx));
      trace.mean_total += total;
      trace.mean_edge_class += loss.edge_class.value()(0, 0);
      trace.mean_dice += loss.dice.value()(0, 0);

      Gradients grads = tape.backward(loss.total);
      std::vector<ADValue> leaves = bound.leaves();
      std::vector<DenseMatrix> grad_mats;
      grad_mats.reserve(leaves.size());
      for (const ADValue& leaf : leaves) grad_mats.push_back(grads.at(leaf));
      adam.step(params, grad_mats, cfg.adam);
    }
    double inv = 1.0 / static_cast<double>(samples.size());
    trace.mean_total *= inv;
    trace.mean_edge_class *= inv;
    trace.mean_dice *= inv;
    result.trace.push_back(trace);
  }
  return result;
}

}  // namespace gln
