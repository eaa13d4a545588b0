// Experiment commands behind the CLI: dataset generation, training,
// evaluation, the depth / robustness sweeps and the loss ablation. Every
// command resolves its configuration up front, writes its outputs under one
// directory, and drops a manifest sufficient to replay the run bit-for-bit.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gln/config.hpp"
#include "gln/datasets.hpp"
#include "gln/graph.hpp"
#include "gln/hash.hpp"
#include "gln/metrics.hpp"
#include "gln/network.hpp"
#include "gln/train.hpp"

namespace gln {

inline constexpr int kManifestFormatVersion = 1;

// ---- small file helpers -----------------------------------------------------

inline std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

// Relative output directories live under $GLN_OUTPUT_ROOT when it is set.
inline std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("GLN_OUTPUT_ROOT")) p = std::filesystem::path(root) / p;
  }
  std::filesystem::create_directories(p);
  return p;
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// ---- dataset generation -------------------------------------------------------

inline std::vector<GraphSample> generate_samples(const ExperimentConfig& cfg) {
  cfg.validate();
  int count = cfg.resolved_samples();
  std::vector<GraphSample> samples;
  samples.reserve(count);
  if (cfg.family == "community") {
    CommunitySpec spec;
    spec.communities = cfg.communities();
    spec.p_rewire = cfg.p_rewire;
    for (int i = 0; i < count; ++i) samples.push_back(gen_community(spec, mix_seed(cfg.seed_data, i)));
  } else if (cfg.family == "surface") {
    SurfaceSpec spec;
    spec.u_steps = cfg.surface_nodes == 100 ? 10 : 20;
    spec.v_steps = spec.u_steps;
    if (cfg.variant == "mixed") {
      const auto& kinds = all_surface_kinds();
      for (int i = 0; i < count; ++i) {
        spec.kind = kinds[i % kinds.size()];
        samples.push_back(gen_surface(spec, mix_seed(cfg.seed_data, i)));
      }
    } else {
      spec.kind = surface_kind_from_name(cfg.variant);
      for (int i = 0; i < count; ++i) samples.push_back(gen_surface(spec, mix_seed(cfg.seed_data, i)));
    }
  } else {
    FigureImageSpec spec;
    spec.noise_std = cfg.noise_std;
    spec.min_figures = cfg.min_figures;
    spec.max_figures = cfg.max_figures;
    for (int i = 0; i < count; ++i)
      samples.push_back(gen_figure_image(spec, mix_seed(cfg.seed_data, i)));
  }
  return samples;
}

// The split seed derives from the data seed so evaluation recovers the exact
// train/test partition used by training.
inline uint64_t split_seed(const ExperimentConfig& cfg) { return mix_seed(cfg.seed_data, 0x5317); }

// ---- manifests -----------------------------------------------------------------

inline nlohmann::json file_stamp(const std::string& path) {
  return {{"path", path}, {"sha1", git_blob_hash(path)}};
}

inline void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                           const ExperimentConfig& cfg, const nlohmann::json& inputs,
                           const nlohmann::json& args, const nlohmann::json& outputs) {
  nlohmann::json m;
  m["format_version"] = kManifestFormatVersion;
  m["command"] = command;
  m["created_utc"] = utc_timestamp();
  m["config_toml"] = to_toml_string(config_to_toml(cfg));
  m["inputs"] = inputs;
  m["args"] = args;
  m["outputs"] = outputs;
  std::ofstream out(out_dir / "manifest.json");
  out << m.dump(2) << "\n";
}

// ---- gen ------------------------------------------------------------------------

struct GenOutputs {
  std::string dataset_path;
  std::string summary_path;
  int sample_count = 0;
};

inline GenOutputs run_gen(const ExperimentConfig& cfg) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  std::vector<GraphSample> samples = generate_samples(cfg);

  GenOutputs out;
  out.dataset_path = (dir / "dataset.ndjson").string();
  out.sample_count = static_cast<int>(samples.size());
  save_dataset(samples, out.dataset_path);

  double density_sum = 0.0;
  for (const GraphSample& s : samples) {
    double pairs = 0.5 * s.n() * (s.n() - 1);
    density_sum += edge_list(s.adjacency).size() / pairs;
  }
  nlohmann::json summary;
  summary["family"] = cfg.family;
  summary["variant"] = cfg.variant;
  summary["samples"] = samples.size();
  summary["n"] = samples.empty() ? 0 : samples.front().n();
  summary["d"] = samples.empty() ? 0 : samples.front().feature_dim();
  summary["mean_edge_density"] = samples.empty() ? 0.0 : density_sum / samples.size();
  out.summary_path = (dir / "summary.json").string();
  write_text(out.summary_path, summary.dump(2) + "\n");

  write_manifest(dir, "gen", cfg, nlohmann::json::object(), nlohmann::json::object(),
                 {{"dataset", file_stamp(out.dataset_path)},
                  {"summary", out.summary_path}});
  return out;
}

// ---- train ----------------------------------------------------------------------

struct TrainOutputs {
  std::string checkpoint_path;
  std::string loss_csv_path;
  TrainResult result;
};

inline GlnModel make_model_for(const ExperimentConfig& cfg, int n) {
  return make_gln_model(cfg.model_dims(), n, cfg.kernels, cfg.epsilon, cfg.seed_init);
}

inline TrainConfig train_config_for(const ExperimentConfig& cfg) {
  TrainConfig tc;
  tc.epochs = cfg.resolved_epochs();
  tc.adam.learning_rate = cfg.resolved_learning_rate();
  tc.adam.beta1 = cfg.beta1;
  tc.adam.beta2 = cfg.beta2;
  tc.adam.epsilon = cfg.adam_epsilon;
  tc.weights = cfg.loss_weights();
  tc.shuffle_seed = cfg.seed_shuffle;
  return tc;
}

inline void check_uniform_n(const std::vector<GraphSample>& samples) {
  for (const GraphSample& s : samples)
    if (s.n() != samples.front().n() || s.feature_dim() != samples.front().feature_dim())
      throw std::runtime_error("dataset mixes node counts or feature dims across samples");
}

inline std::vector<std::vector<std::string>> loss_trace_rows(const TrainResult& result) {
  std::vector<std::vector<std::string>> rows;
  for (size_t e = 0; e < result.trace.size(); ++e)
    rows.push_back({std::to_string(e), format_csv_double(result.trace[e].mean_total),
                    format_csv_double(result.trace[e].mean_edge_class),
                    format_csv_double(result.trace[e].mean_dice)});
  return rows;
}

inline TrainOutputs run_train(const ExperimentConfig& cfg, const std::string& dataset_path) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  if (samples.size() < 2) throw std::runtime_error("training needs at least 2 samples");
  check_uniform_n(samples);
  auto [train_set, test_set] = split_dataset(samples, cfg.train_fraction, split_seed(cfg));

  GlnModel model = make_model_for(cfg, samples.front().n());
  TrainOutputs out;
  out.result = train(model, train_set, train_config_for(cfg));

  out.checkpoint_path = (dir / "checkpoint.json").string();
  save_checkpoint(model, out.checkpoint_path);
  out.loss_csv_path = (dir / "loss_trace.csv").string();
  write_csv(out.loss_csv_path, {"epoch", "mean_total", "mean_Lc", "mean_Ls"},
            loss_trace_rows(out.result));

  write_manifest(dir, "train", cfg, {{"dataset", file_stamp(dataset_path)}},
                 nlohmann::json::object(),
                 {{"checkpoint", file_stamp(out.checkpoint_path)},
                  {"loss_trace", file_stamp(out.loss_csv_path)}});
  return out;
}

// ---- eval -----------------------------------------------------------------------

struct EvalOptions {
  std::string split = "test";  // test | train | all
  InitialAdjacencyMode init_mode = InitialAdjacencyMode::Identity;
  double init_p = 0.0;
  uint64_t init_seed = 0;
};

struct EvalOutputs {
  EdgeClassReport aggregate;
  MmdReport mmd;
  std::vector<EdgeClassReport> per_sample;
  std::string samples_csv_path;
  std::string summary_csv_path;
};

inline std::vector<GraphSample> select_split(const std::vector<GraphSample>& samples,
                                             const ExperimentConfig& cfg,
                                             const std::string& split) {
  if (split == "all") return samples;
  auto [train_set, test_set] = split_dataset(samples, cfg.train_fraction, split_seed(cfg));
  if (split == "train") return train_set;
  if (split == "test") return test_set;
  throw std::runtime_error("unknown split: " + split);
}

// Forward each sample from (features, A0), binarize at the model epsilon,
// and score edges plus MMD between the predicted and ground-truth sets.
inline EvalOutputs evaluate_model(const GlnModel& model, const std::vector<GraphSample>& samples,
                                  const ExperimentConfig& cfg, const EvalOptions& opts) {
  if (samples.empty()) throw std::runtime_error("evaluation split is empty");
  EvalOutputs out;
  std::vector<DenseMatrix> truth, predicted;
  for (size_t i = 0; i < samples.size(); ++i) {
    const GraphSample& s = samples[i];
    if (s.n() != model.n)
      throw std::runtime_error("checkpoint n=" + std::to_string(model.n) +
                               " does not match dataset n=" + std::to_string(s.n()));
    DenseMatrix a0 =
        opts.init_mode == InitialAdjacencyMode::Identity
            ? DenseMatrix::identity(model.n)
            : make_initial_adjacency(model.n, InitialAdjacencyMode::RandomProportion, opts.init_p,
                                     mix_seed(opts.init_seed, i));
    DenseMatrix pred = binarize(gln_predict(model, s.features, a0), model.epsilon);
    out.per_sample.push_back(edge_class_metrics(pred, s.adjacency));
    truth.push_back(s.adjacency);
    predicted.push_back(std::move(pred));
  }
  out.aggregate = aggregate_edge_class(out.per_sample);
  out.mmd = mmd_report(truth, predicted, cfg.mmd_sigma);
  return out;
}

inline std::vector<std::string> report_row(const MmdReport& mmd, const EdgeClassReport& edge) {
  return {format_csv_double(mmd.degree_mmd),  format_csv_double(mmd.clustering_mmd),
          format_csv_double(mmd.orbit_mmd),   format_csv_double(edge.accuracy),
          format_csv_double(edge.iou),        format_csv_double(edge.dice),
          format_csv_double(edge.precision),  format_csv_double(edge.recall)};
}

inline const std::vector<std::string> kReportHeader = {
    "degree_mmd", "clustering_mmd", "orbit_mmd", "acc", "iou", "dice", "precision", "recall"};

inline EvalOutputs run_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                            const std::string& dataset_path, const EvalOptions& opts = {}) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  GlnModel model = load_checkpoint(checkpoint_path);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  check_uniform_n(samples);
  std::vector<GraphSample> chosen = select_split(samples, cfg, opts.split);

  EvalOutputs out = evaluate_model(model, chosen, cfg, opts);

  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < out.per_sample.size(); ++i) {
    const EdgeClassReport& r = out.per_sample[i];
    rows.push_back({std::to_string(i), format_csv_double(r.accuracy), format_csv_double(r.iou),
                    format_csv_double(r.dice), format_csv_double(r.precision),
                    format_csv_double(r.recall)});
  }
  out.samples_csv_path = (dir / "eval_samples.csv").string();
  write_csv(out.samples_csv_path, {"sample", "acc", "iou", "dice", "precision", "recall"}, rows);

  out.summary_csv_path = (dir / "eval_summary.csv").string();
  write_csv(out.summary_csv_path, kReportHeader, {report_row(out.mmd, out.aggregate)});

  write_manifest(dir, "eval", cfg,
                 {{"dataset", file_stamp(dataset_path)},
                  {"checkpoint", file_stamp(checkpoint_path)}},
                 {{"split", opts.split},
                  {"init_mode",
                   opts.init_mode == InitialAdjacencyMode::Identity ? "identity" : "random"},
                  {"init_p", opts.init_p},
                  {"init_seed", opts.init_seed}},
                 {{"eval_samples", file_stamp(out.samples_csv_path)},
                  {"eval_summary", file_stamp(out.summary_csv_path)}});
  return out;
}

// ---- depth sweep ------------------------------------------------------------------

// One model per depth, same seeds throughout; rows are (L, the three MMDs).
inline std::string run_depth_sweep(const ExperimentConfig& cfg, const std::string& dataset_path,
                                   const std::vector<int>& l_values) {
  if (l_values.empty()) throw std::runtime_error("depth sweep needs at least one L value");
  for (int l : l_values)
    if (l < 1) throw std::runtime_error("depth sweep L values must be >= 1");
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  check_uniform_n(samples);
  auto [train_set, test_set] = split_dataset(samples, cfg.train_fraction, split_seed(cfg));

  std::vector<std::vector<std::string>> rows;
  for (int l : l_values) {
    ExperimentConfig sub = cfg;
    sub.layers = l;
    GlnModel model = make_model_for(sub, samples.front().n());
    train(model, train_set, train_config_for(sub));
    EvalOutputs ev = evaluate_model(model, test_set, sub, {});
    rows.push_back({std::to_string(l), format_csv_double(ev.mmd.degree_mmd),
                    format_csv_double(ev.mmd.clustering_mmd),
                    format_csv_double(ev.mmd.orbit_mmd)});
  }
  std::string csv_path = (dir / "depth_sweep.csv").string();
  write_csv(csv_path, {"L", "degree_mmd", "clustering_mmd", "orbit_mmd"}, rows);

  nlohmann::json args;
  args["l_values"] = l_values;
  write_manifest(dir, "depth-sweep", cfg, {{"dataset", file_stamp(dataset_path)}}, args,
                 {{"depth_sweep", file_stamp(csv_path)}});
  return csv_path;
}

// ---- robustness sweep ----------------------------------------------------------------

// For each proportion p, the test split is evaluated robustness_runs times
// with A0 = random_proportion(p) under distinct derived seeds; rows carry the
// mean MMDs. p = 0 stands for the identity-input baseline.
inline std::string run_robustness(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                                  const std::string& dataset_path,
                                  const std::vector<double>& proportions) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  GlnModel model = load_checkpoint(checkpoint_path);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  check_uniform_n(samples);
  auto [train_set, test_set] = split_dataset(samples, cfg.train_fraction, split_seed(cfg));

  std::vector<std::vector<std::string>> rows;
  for (double p : proportions) {
    if (p < 0.0 || p > 1.0) throw std::runtime_error("robustness proportions must lie in [0,1]");
    double deg = 0.0, clus = 0.0, orb = 0.0;
    int runs = p == 0.0 ? 1 : cfg.robustness_runs;
    for (int r = 0; r < runs; ++r) {
      EvalOptions opts;
      if (p == 0.0) {
        opts.init_mode = InitialAdjacencyMode::Identity;
      } else {
        opts.init_mode = InitialAdjacencyMode::RandomProportion;
        opts.init_p = p;
        opts.init_seed = mix_seed(cfg.seed_data, 0xB0B + static_cast<uint64_t>(r));
      }
      EvalOutputs ev = evaluate_model(model, test_set, cfg, opts);
      deg += ev.mmd.degree_mmd;
      clus += ev.mmd.clustering_mmd;
      orb += ev.mmd.orbit_mmd;
    }
    rows.push_back({format_csv_double(p), format_csv_double(deg / runs),
                    format_csv_double(clus / runs), format_csv_double(orb / runs)});
  }
  std::string csv_path = (dir / "robustness.csv").string();
  write_csv(csv_path, {"proportion", "degree_mmd", "clustering_mmd", "orbit_mmd"}, rows);

  nlohmann::json args;
  args["proportions"] = proportions;
  write_manifest(dir, "robustness", cfg,
                 {{"dataset", file_stamp(dataset_path)},
                  {"checkpoint", file_stamp(checkpoint_path)}},
                 args, {{"robustness", file_stamp(csv_path)}});
  return csv_path;
}

// ---- ablation ---------------------------------------------------------------------------

struct AblationVariant {
  std::string name;
  double psi1, psi2, weight_decay;
};

inline std::vector<AblationVariant> ablation_variants(double reg) {
  return {{"hed", 1.0, 0.0, 0.0},        {"hed+reg", 1.0, 0.0, reg},
          {"iou", 0.0, 1.0, 0.0},        {"iou+reg", 0.0, 1.0, reg},
          {"iou+hed", 1.0, 1.0, 0.0},    {"iou+hed+reg", 1.0, 1.0, reg}};
}

// Six loss arrangements trained with identical seeds on the same split.
inline std::string run_ablation(const ExperimentConfig& cfg, const std::string& dataset_path) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  check_uniform_n(samples);
  auto [train_set, test_set] = split_dataset(samples, cfg.train_fraction, split_seed(cfg));

  std::vector<std::vector<std::string>> rows;
  for (const AblationVariant& variant : ablation_variants(cfg.ablation_weight_decay)) {
    ExperimentConfig sub = cfg;
    sub.psi1 = variant.psi1;
    sub.psi2 = variant.psi2;
    sub.weight_decay = variant.weight_decay;
    GlnModel model = make_model_for(sub, samples.front().n());
    train(model, train_set, train_config_for(sub));
    EvalOutputs ev = evaluate_model(model, test_set, sub, {});
    rows.push_back({variant.name, format_csv_double(variant.psi1),
                    format_csv_double(variant.psi2), format_csv_double(variant.weight_decay),
                    format_csv_double(ev.aggregate.accuracy),
                    format_csv_double(ev.aggregate.iou), format_csv_double(ev.aggregate.dice),
                    format_csv_double(ev.mmd.degree_mmd),
                    format_csv_double(ev.mmd.clustering_mmd),
                    format_csv_double(ev.mmd.orbit_mmd)});
  }
  std::string csv_path = (dir / "ablation.csv").string();
  write_csv(csv_path,
            {"variant", "psi1", "psi2", "weight_decay", "acc", "iou", "dice", "degree_mmd",
             "clustering_mmd", "orbit_mmd"},
            rows);
  write_manifest(dir, "ablation", cfg, {{"dataset", file_stamp(dataset_path)}},
                 nlohmann::json::object(), {{"ablation", file_stamp(csv_path)}});
  return csv_path;
}

// ---- predict ----------------------------------------------------------------------------

// Dump the predicted edge list for one sample of the dataset.
inline std::string run_predict(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                               const std::string& dataset_path, int index) {
  std::filesystem::path dir = resolve_output_dir(cfg.output_dir);
  GlnModel model = load_checkpoint(checkpoint_path);
  std::vector<GraphSample> samples = load_dataset(dataset_path);
  if (index < 0 || index >= static_cast<int>(samples.size()))
    throw std::runtime_error("predict: sample index out of range");
  const GraphSample& s = samples[index];
  DenseMatrix soft = gln_predict(model, s.features, DenseMatrix::identity(model.n));
  DenseMatrix pred = binarize(soft, model.epsilon);

  nlohmann::json j;
  j["sample"] = index;
  j["n"] = model.n;
  j["epsilon"] = model.epsilon;
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : edge_list(pred)) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  nlohmann::json truth_edges = nlohmann::json::array();
  for (auto [a, b] : edge_list(s.adjacency)) truth_edges.push_back({a, b});
  j["truth_edges"] = std::move(truth_edges);

  std::string path = (dir / ("prediction_" + std::to_string(index) + ".json")).string();
  write_text(path, j.dump() + "\n");
  write_manifest(dir, "predict", cfg,
                 {{"dataset", file_stamp(dataset_path)},
                  {"checkpoint", file_stamp(checkpoint_path)}},
                 {{"index", index}}, {{"prediction", file_stamp(path)}});
  return path;
}

// ---- manifest replay ---------------------------------------------------------------------

// Re-runs the command recorded in a manifest with its stored configuration
// and input paths; outputs land in the same output directory.
inline void run_from_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot read manifest: " + manifest_path);
  nlohmann::json m;
  in >> m;
  ExperimentConfig cfg = config_from_toml(parse_toml_string(m.at("config_toml").get<std::string>()));
  std::string command = m.at("command").get<std::string>();
  const nlohmann::json& inputs = m.at("inputs");
  const nlohmann::json& args = m.at("args");

  auto input_path = [&](const char* key) {
    return inputs.at(key).at("path").get<std::string>();
  };

  if (command == "gen") {
    run_gen(cfg);
  } else if (command == "train") {
    run_train(cfg, input_path("dataset"));
  } else if (command == "eval") {
    EvalOptions opts;
    opts.split = args.at("split").get<std::string>();
    opts.init_mode = args.at("init_mode").get<std::string>() == "identity"
                         ? InitialAdjacencyMode::Identity
                         : InitialAdjacencyMode::RandomProportion;
    opts.init_p = args.at("init_p").get<double>();
    opts.init_seed = args.at("init_seed").get<uint64_t>();
    run_eval(cfg, input_path("checkpoint"), input_path("dataset"), opts);
  } else if (command == "depth-sweep") {
    run_depth_sweep(cfg, input_path("dataset"), args.at("l_values").get<std::vector<int>>());
  } else if (command == "robustness") {
    run_robustness(cfg, input_path("checkpoint"), input_path("dataset"),
                   args.at("proportions").get<std::vector<double>>());
  } else if (command == "ablation") {
    run_ablation(cfg, input_path("dataset"));
  } else if (command == "predict") {
    run_predict(cfg, input_path("checkpoint"), input_path("dataset"), args.at("index").get<int>());
  } else {
    throw std::runtime_error("manifest names unknown command: " + command);
  }
}

}  // namespace gln
