// Experiment configuration: one declarative TOML document drives generation,
// training, evaluation and sweeps. Every omitted field falls back to the
// published defaults (L=5, d=32, k=3, eps=0.5, psi1=psi2=1, per-family
// learning rates and epoch counts).
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "gln/losses.hpp"
#include "gln/toml.hpp"

namespace gln {

struct ExperimentConfig {
  // dataset
  std::string family = "community";  // community | surface | figures
  std::string variant = "c2";        // c2/c4, a surface kind, "mixed", or "default"
  int samples = -1;                  // -1: family default
  int surface_nodes = 100;           // 100 or 400
  double p_rewire = 0.05;
  double noise_std = 0.02;
  int min_figures = 1;
  int max_figures = 3;

  // model
  int layers = 5;
  int hidden_dim = 32;
  int kernels = 3;
  double epsilon = 0.5;

  // loss
  double psi1 = 1.0;
  double psi2 = 1.0;
  double weight_decay = 0.0;
  std::string balance_mode = "paper_literal";

  // optimizer
  double learning_rate = -1.0;  // -1: family default
  int epochs = -1;              // -1: family default
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;

  // run
  double train_fraction = 0.8;
  uint64_t seed_data = 1;
  uint64_t seed_init = 2;
  uint64_t seed_shuffle = 3;
  std::string output_dir = "runs/default";
  double mmd_sigma = 1.0;

  // sweeps
  std::vector<double> sweep_layers = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> sweep_proportions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int robustness_runs = 5;
  double ablation_weight_decay = 1e-4;

  int communities() const {
    if (variant == "c2") return 2;
    if (variant == "c4") return 4;
    throw std::runtime_error("community variant must be c2 or c4, got " + variant);
  }

  int default_samples() const {
    if (family == "community") return communities() == 2 ? 300 : 500;
    if (family == "surface") return 200;
    if (family == "figures") return 3000;
    throw std::runtime_error("unknown dataset family: " + family);
  }

  double default_learning_rate() const { return family == "community" ? 1e-5 : 5e-6; }

  int default_epochs() const {
    if (family == "community") return 150;
    if (family == "surface") return 200;
    return 150;  // figures
  }

  int feature_dim() const { return family == "community" ? 2 : 3; }

  int node_count() const {
    if (family == "community") return 20 * communities();
    if (family == "surface") return surface_nodes;
    if (family == "figures") return 400;
    throw std::runtime_error("unknown dataset family: " + family);
  }

  int resolved_samples() const { return samples > 0 ? samples : default_samples(); }
  double resolved_learning_rate() const {
    return learning_rate > 0 ? learning_rate : default_learning_rate();
  }
  int resolved_epochs() const { return epochs >= 0 ? epochs : default_epochs(); }

  std::vector<int> model_dims() const {
    std::vector<int> dims = {feature_dim()};
    for (int l = 0; l < layers; ++l) dims.push_back(hidden_dim);
    return dims;
  }

  LossWeights loss_weights() const {
    return {psi1, psi2, weight_decay, balance_mode_from_name(balance_mode)};
  }

  void validate() const {
    if (family != "community" && family != "surface" && family != "figures")
      throw std::runtime_error("unknown dataset family: " + family);
    if (family == "community") (void)communities();
    if (family == "surface" && surface_nodes != 100 && surface_nodes != 400)
      throw std::runtime_error("surface_nodes must be 100 or 400");
    if (!(epsilon > 0 && epsilon < 1)) throw std::runtime_error("epsilon must lie in (0,1)");
    if (layers < 0) throw std::runtime_error("layers must be nonnegative");
    if (kernels < 1) throw std::runtime_error("kernels must be >= 1");
    if (!(train_fraction > 0 && train_fraction < 1))
      throw std::runtime_error("train_fraction must lie in (0,1)");
    if (psi1 + psi2 <= 0) throw std::runtime_error("psi1 + psi2 must be positive");
  }
};

inline ExperimentConfig config_from_toml(const TomlTable& t) {
  ExperimentConfig c;
  c.family = t.get_string("dataset.family", c.family);
  c.variant = t.get_string("dataset.variant", c.variant);
  c.samples = static_cast<int>(t.get_int("dataset.samples", c.samples));
  c.surface_nodes = static_cast<int>(t.get_int("dataset.surface_nodes", c.surface_nodes));
  c.p_rewire = t.get_double("dataset.p_rewire", c.p_rewire);
  c.noise_std = t.get_double("dataset.noise_std", c.noise_std);
  c.min_figures = static_cast<int>(t.get_int("dataset.min_figures", c.min_figures));
  c.max_figures = static_cast<int>(t.get_int("dataset.max_figures", c.max_figures));

  c.layers = static_cast<int>(t.get_int("model.layers", c.layers));
  c.hidden_dim = static_cast<int>(t.get_int("model.hidden_dim", c.hidden_dim));
  c.kernels = static_cast<int>(t.get_int("model.kernels", c.kernels));
  c.epsilon = t.get_double("model.epsilon", c.epsilon);

  c.psi1 = t.get_double("loss.psi1", c.psi1);
  c.psi2 = t.get_double("loss.psi2", c.psi2);
  c.weight_decay = t.get_double("loss.weight_decay", c.weight_decay);
  c.balance_mode = t.get_string("loss.balance_mode", c.balance_mode);

  c.learning_rate = t.get_double("optim.learning_rate", c.learning_rate);
  c.epochs = static_cast<int>(t.get_int("optim.epochs", c.epochs));
  c.beta1 = t.get_double("optim.beta1", c.beta1);
  c.beta2 = t.get_double("optim.beta2", c.beta2);
  c.adam_epsilon = t.get_double("optim.adam_epsilon", c.adam_epsilon);

  c.train_fraction = t.get_double("run.train_fraction", c.train_fraction);
  c.seed_data = static_cast<uint64_t>(t.get_int("run.seed_data", static_cast<int64_t>(c.seed_data)));
  c.seed_init = static_cast<uint64_t>(t.get_int("run.seed_init", static_cast<int64_t>(c.seed_init)));
  c.seed_shuffle =
      static_cast<uint64_t>(t.get_int("run.seed_shuffle", static_cast<int64_t>(c.seed_shuffle)));
  c.output_dir = t.get_string("run.output_dir", c.output_dir);
  c.mmd_sigma = t.get_double("run.mmd_sigma", c.mmd_sigma);

  if (t.contains("sweep.layers")) c.sweep_layers = t.at("sweep.layers").as_double_array();
  if (t.contains("sweep.proportions"))
    c.sweep_proportions = t.at("sweep.proportions").as_double_array();
  c.robustness_runs = static_cast<int>(t.get_int("sweep.robustness_runs", c.robustness_runs));
  c.ablation_weight_decay = t.get_double("sweep.ablation_weight_decay", c.ablation_weight_decay);

  c.validate();
  return c;
}

inline TomlTable config_to_toml(const ExperimentConfig& c) {
  TomlTable t;
  t.set("dataset.family", {c.family});
  t.set("dataset.variant", {c.variant});
  t.set("dataset.samples", {static_cast<int64_t>(c.samples)});
  t.set("dataset.surface_nodes", {static_cast<int64_t>(c.surface_nodes)});
  t.set("dataset.p_rewire", {c.p_rewire});
  t.set("dataset.noise_std", {c.noise_std});
  t.set("dataset.min_figures", {static_cast<int64_t>(c.min_figures)});
  t.set("dataset.max_figures", {static_cast<int64_t>(c.max_figures)});

  t.set("model.layers", {static_cast<int64_t>(c.layers)});
  t.set("model.hidden_dim", {static_cast<int64_t>(c.hidden_dim)});
  t.set("model.kernels", {static_cast<int64_t>(c.kernels)});
  t.set("model.epsilon", {c.epsilon});

  t.set("loss.psi1", {c.psi1});
  t.set("loss.psi2", {c.psi2});
  t.set("loss.weight_decay", {c.weight_decay});
  t.set("loss.balance_mode", {c.balance_mode});

  t.set("optim.learning_rate", {c.learning_rate});
  t.set("optim.epochs", {static_cast<int64_t>(c.epochs)});
  t.set("optim.beta1", {c.beta1});
  t.set("optim.beta2", {c.beta2});
  t.set("optim.adam_epsilon", {c.adam_epsilon});

  t.set("run.train_fraction", {c.train_fraction});
  t.set("run.seed_data", {static_cast<int64_t>(c.seed_data)});
  t.set("run.seed_init", {static_cast<int64_t>(c.seed_init)});
  t.set("run.seed_shuffle", {static_cast<int64_t>(c.seed_shuffle)});
  t.set("run.output_dir", {c.output_dir});
  t.set("run.mmd_sigma", {c.mmd_sigma});

  t.set("sweep.layers", {c.sweep_layers});
  t.set("sweep.proportions", {c.sweep_proportions});
  t.set("sweep.robustness_runs", {static_cast<int64_t>(c.robustness_runs)});
  t.set("sweep.ablation_weight_decay", {c.ablation_weight_decay});
  return t;
}

inline ExperimentConfig load_config(const std::string& path) {
  return config_from_toml(parse_toml_file(path));
}

inline void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << to_toml_string(config_to_toml(c));
}

}  // namespace gln
