// Command-line front end: gen / train / eval / depth-sweep / robustness /
// ablation / predict, all driven by a TOML config whose keys individual
// flags can override (flags win). --manifest replays a recorded run.
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gln/experiment.hpp"

namespace {

struct ConfigCli {
  std::string config_path;
  std::optional<std::string> family, variant, balance_mode, output_dir;
  std::optional<int> samples, surface_nodes, layers, hidden_dim, kernels, epochs;
  std::optional<double> epsilon, psi1, psi2, weight_decay, learning_rate, train_fraction,
      p_rewire, noise_std, mmd_sigma;
  std::optional<uint64_t> seed_data, seed_init, seed_shuffle;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "TOML config file");
    cmd->add_option("--family", family, "dataset family: community|surface|figures");
    cmd->add_option("--variant", variant, "dataset variant (c2, c4, torus, ..., mixed)");
    cmd->add_option("--samples", samples, "sample count");
    cmd->add_option("--surface-nodes", surface_nodes, "nodes per surface (100 or 400)");
    cmd->add_option("--p-rewire", p_rewire, "caveman rewiring probability");
    cmd->add_option("--noise-std", noise_std, "figure image color noise std");
    cmd->add_option("--layers", layers, "recurrent steps L");
    cmd->add_option("--hidden-dim", hidden_dim, "feature dimension d_l");
    cmd->add_option("--kernels", kernels, "convolution kernels k");
    cmd->add_option("--epsilon", epsilon, "binarization threshold");
    cmd->add_option("--psi1", psi1, "edge-class loss weight");
    cmd->add_option("--psi2", psi2, "structural loss weight");
    cmd->add_option("--weight-decay", weight_decay, "L2 coefficient");
    cmd->add_option("--balance-mode", balance_mode, "paper_literal|hed_standard");
    cmd->add_option("--learning-rate", learning_rate, "ADAM learning rate");
    cmd->add_option("--epochs", epochs, "training epochs");
    cmd->add_option("--train-fraction", train_fraction, "train split fraction");
    cmd->add_option("--seed-data", seed_data, "dataset generation / split seed");
    cmd->add_option("--seed-init", seed_init, "parameter initialization seed");
    cmd->add_option("--seed-shuffle", seed_shuffle, "epoch shuffle seed");
    cmd->add_option("--out", output_dir, "output directory (under $GLN_OUTPUT_ROOT if relative)");
    cmd->add_option("--mmd-sigma", mmd_sigma, "MMD kernel bandwidth");
  }

  gln::ExperimentConfig resolve() const {
    gln::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = gln::load_config(config_path);
    auto override_if = [](auto& field, const auto& opt) {
      if (opt.has_value()) field = *opt;
    };
    override_if(cfg.family, family);
    override_if(cfg.variant, variant);
    override_if(cfg.samples, samples);
    override_if(cfg.surface_nodes, surface_nodes);
    override_if(cfg.p_rewire, p_rewire);
    override_if(cfg.noise_std, noise_std);
    override_if(cfg.layers, layers);
    override_if(cfg.hidden_dim, hidden_dim);
    override_if(cfg.kernels, kernels);
    override_if(cfg.epsilon, epsilon);
    override_if(cfg.psi1, psi1);
    override_if(cfg.psi2, psi2);
    override_if(cfg.weight_decay, weight_decay);
    override_if(cfg.balance_mode, balance_mode);
    override_if(cfg.learning_rate, learning_rate);
    override_if(cfg.epochs, epochs);
    override_if(cfg.train_fraction, train_fraction);
    override_if(cfg.seed_data, seed_data);
    override_if(cfg.seed_init, seed_init);
    override_if(cfg.seed_shuffle, seed_shuffle);
    override_if(cfg.output_dir, output_dir);
    override_if(cfg.mmd_sigma, mmd_sigma);
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph Learning Network experiments"};
  app.require_subcommand(0, 1);

  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "replay a recorded run from its manifest");

  ConfigCli gen_cfg, train_cfg, eval_cfg, depth_cfg, robust_cfg, ablation_cfg, predict_cfg;
  std::string dataset_path, checkpoint_path;
  std::string eval_split = "test";
  std::string eval_init = "identity";
  double eval_init_p = 0.0;
  uint64_t eval_init_seed = 0;
  std::vector<int> l_values;
  std::vector<double> proportions;
  int predict_index = 0;

  CLI::App* gen = app.add_subcommand("gen", "generate a dataset");
  gen_cfg.attach(gen);

  CLI::App* train = app.add_subcommand("train", "train a model on a dataset");
  train_cfg.attach(train);
  train->add_option("--dataset", dataset_path, "NDJSON dataset")->required();

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cfg.attach(eval);
  eval->add_option("--dataset", dataset_path, "NDJSON dataset")->required();
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  eval->add_option("--split", eval_split, "test|train|all");
  eval->add_option("--init", eval_init, "initial adjacency: identity|random");
  eval->add_option("--init-p", eval_init_p, "proportion of pairs for random init");
  eval->add_option("--init-seed", eval_init_seed, "seed for random init");

  CLI::App* depth = app.add_subcommand("depth-sweep", "train and evaluate across depths");
  depth_cfg.attach(depth);
  depth->add_option("--dataset", dataset_path, "NDJSON dataset")->required();
  depth->add_option("--L", l_values, "depths to sweep (default from config)");

  CLI::App* robust = app.add_subcommand("robustness", "vary the input structure proportion");
  robust_cfg.attach(robust);
  robust->add_option("--dataset", dataset_path, "NDJSON dataset")->required();
  robust->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  robust->add_option("--proportions", proportions, "proportions to sweep (default from config)");

  CLI::App* ablation = app.add_subcommand("ablation", "train the six loss variants");
  ablation_cfg.attach(ablation);
  ablation->add_option("--dataset", dataset_path, "NDJSON dataset")->required();

  CLI::App* predict = app.add_subcommand("predict", "dump the predicted edge list for a sample");
  predict_cfg.attach(predict);
  predict->add_option("--dataset", dataset_path, "NDJSON dataset")->required();
  predict->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  predict->add_option("--index", predict_index, "sample index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!manifest_path.empty()) {
      gln::run_from_manifest(manifest_path);
      return 0;
    }
    if (gen->parsed()) {
      gln::GenOutputs out = gln::run_gen(gen_cfg.resolve());
      std::printf("wrote %d samples to %s\n", out.sample_count, out.dataset_path.c_str());
    } else if (train->parsed()) {
      gln::TrainOutputs out = gln::run_train(train_cfg.resolve(), dataset_path);
      if (!out.result.trace.empty())
        std::printf("final epoch mean loss %.6f\n", out.result.trace.back().mean_total);
      std::printf("checkpoint: %s\n", out.checkpoint_path.c_str());
    } else if (eval->parsed()) {
      gln::EvalOptions opts;
      opts.split = eval_split;
      opts.init_mode = eval_init == "identity" ? gln::InitialAdjacencyMode::Identity
                                               : gln::InitialAdjacencyMode::RandomProportion;
      opts.init_p = eval_init_p;
      opts.init_seed = eval_init_seed;
      gln::EvalOutputs out = gln::run_eval(eval_cfg.resolve(), checkpoint_path, dataset_path, opts);
      std::printf("acc=%.6f iou=%.6f dice=%.6f deg_mmd=%.6g clus_mmd=%.6g orb_mmd=%.6g\n",
                  out.aggregate.accuracy, out.aggregate.iou, out.aggregate.dice,
                  out.mmd.degree_mmd, out.mmd.clustering_mmd, out.mmd.orbit_mmd);
    } else if (depth->parsed()) {
      gln::ExperimentConfig cfg = depth_cfg.resolve();
      std::vector<int> ls = l_values;
      if (ls.empty())
        for (double v : cfg.sweep_layers) ls.push_back(static_cast<int>(v));
      std::printf("wrote %s\n", gln::run_depth_sweep(cfg, dataset_path, ls).c_str());
    } else if (robust->parsed()) {
      gln::ExperimentConfig cfg = robust_cfg.resolve();
      std::vector<double> ps = proportions.empty() ? cfg.sweep_proportions : proportions;
      std::printf("wrote %s\n",
                  gln::run_robustness(cfg, checkpoint_path, dataset_path, ps).c_str());
    } else if (ablation->parsed()) {
      std::printf("wrote %s\n",
                  gln::run_ablation(ablation_cfg.resolve(), dataset_path).c_str());
    } else if (predict->parsed()) {
      std::printf("wrote %s\n", gln::run_predict(predict_cfg.resolve(), checkpoint_path,
                                                 dataset_path, predict_index)
                                    .c_str());
    } else {
      std::puts(app.help().c_str());
      return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
