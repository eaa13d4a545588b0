#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "gln/config.hpp"
#include "gln/hash.hpp"
#include "gln/toml.hpp"

TEST_CASE("toml parses sections, scalars and arrays") {
  std::string text = R"(
# experiment
title = "hello"
[dataset]
family = "community"   # inline comment
samples = 300
p_rewire = 0.05
flag = true
[sweep]
proportions = [0.1, 0.2, 0.3]
names = ["a", "b"]
)";
  gln::TomlTable t = gln::parse_toml_string(text);
  CHECK(t.at("title").as_string() == "hello");
  CHECK(t.at("dataset.family").as_string() == "community");
  CHECK(t.at("dataset.samples").as_int() == 300);
  CHECK(t.at("dataset.p_rewire").as_double() == 0.05);
  CHECK(t.at("dataset.flag").as_bool());
  CHECK(t.at("sweep.proportions").as_double_array() == std::vector<double>{0.1, 0.2, 0.3});
  CHECK_FALSE(t.contains("nonexistent"));
  CHECK_THROWS(t.at("nope"));
}

TEST_CASE("toml text round-trips through the writer") {
  gln::TomlTable t;
  t.set("run.output_dir", {std::string("runs/x")});
  t.set("run.seed", {int64_t{42}});
  t.set("loss.psi1", {1.0});
  t.set("sweep.proportions", {std::vector<double>{0.1, 0.25}});
  std::string text = gln::to_toml_string(t);
  gln::TomlTable back = gln::parse_toml_string(text);
  CHECK(back.at("run.output_dir").as_string() == "runs/x");
  CHECK(back.at("run.seed").as_int() == 42);
  CHECK(back.at("loss.psi1").as_double() == 1.0);
  CHECK(back.at("sweep.proportions").as_double_array() == std::vector<double>{0.1, 0.25});
}

TEST_CASE("config defaults reproduce the published hyper-parameters") {
  gln::ExperimentConfig c;  // community c2 by default
  CHECK(c.layers == 5);
  CHECK(c.hidden_dim == 32);
  CHECK(c.kernels == 3);
  CHECK(c.epsilon == 0.5);
  CHECK(c.psi1 == 1.0);
  CHECK(c.psi2 == 1.0);
  CHECK(c.weight_decay == 0.0);
  CHECK(c.train_fraction == 0.8);

  CHECK(c.resolved_learning_rate() == 1e-5);
  CHECK(c.resolved_epochs() == 150);
  CHECK(c.resolved_samples() == 300);
  CHECK(c.node_count() == 40);
  CHECK(c.feature_dim() == 2);

  c.variant = "c4";
  CHECK(c.resolved_samples() == 500);
  CHECK(c.node_count() == 80);

  c.family = "surface";
  c.variant = "torus";
  CHECK(c.resolved_learning_rate() == 5e-6);
  CHECK(c.resolved_epochs() == 200);
  CHECK(c.resolved_samples() == 200);
  CHECK(c.node_count() == 100);
  c.surface_nodes = 400;
  CHECK(c.node_count() == 400);

  c.family = "figures";
  c.variant = "default";
  CHECK(c.resolved_learning_rate() == 5e-6);
  CHECK(c.resolved_epochs() == 150);
  CHECK(c.resolved_samples() == 3000);
  CHECK(c.node_count() == 400);
  CHECK(c.feature_dim() == 3);

  CHECK(c.model_dims() == std::vector<int>{3, 32, 32, 32, 32, 32});
}

TEST_CASE("config round-trips losslessly through its file representation") {
  gln::ExperimentConfig c;
  c.family = "surface";
  c.variant = "saddle";
  c.samples = 17;
  c.surface_nodes = 400;
  c.layers = 3;
  c.hidden_dim = 16;
  c.kernels = 2;
  c.epsilon = 0.37;
  c.psi1 = 0.25;
  c.psi2 = 1.75;
  c.weight_decay = 1e-4;
  c.balance_mode = "hed_standard";
  c.learning_rate = 3.3e-4;
  c.epochs = 42;
  c.train_fraction = 0.75;
  c.seed_data = 11;
  c.seed_init = 22;
  c.seed_shuffle = 33;
  c.output_dir = "runs/test";
  c.mmd_sigma = 2.0;
  c.sweep_layers = {1, 3, 5};
  c.sweep_proportions = {0.25, 0.5};
  c.robustness_runs = 3;
  c.ablation_weight_decay = 5e-5;

  std::string path = "config_roundtrip_test.toml";
  gln::save_config(c, path);
  gln::ExperimentConfig back = gln::load_config(path);
  std::remove(path.c_str());

  CHECK(back.family == c.family);
  CHECK(back.variant == c.variant);
  CHECK(back.samples == c.samples);
  CHECK(back.surface_nodes == c.surface_nodes);
  CHECK(back.p_rewire == c.p_rewire);
  CHECK(back.noise_std == c.noise_std);
  CHECK(back.layers == c.layers);
  CHECK(back.hidden_dim == c.hidden_dim);
  CHECK(back.kernels == c.kernels);
  CHECK(back.epsilon == c.epsilon);
  CHECK(back.psi1 == c.psi1);
  CHECK(back.psi2 == c.psi2);
  CHECK(back.weight_decay == c.weight_decay);
  CHECK(back.balance_mode == c.balance_mode);
  CHECK(back.learning_rate == c.learning_rate);
  CHECK(back.epochs == c.epochs);
  CHECK(back.train_fraction == c.train_fraction);
  CHECK(back.seed_data == c.seed_data);
  CHECK(back.seed_init == c.seed_init);
  CHECK(back.seed_shuffle == c.seed_shuffle);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.mmd_sigma == c.mmd_sigma);
  CHECK(back.sweep_layers == c.sweep_layers);
  CHECK(back.sweep_proportions == c.sweep_proportions);
  CHECK(back.robustness_runs == c.robustness_runs);
  CHECK(back.ablation_weight_decay == c.ablation_weight_decay);
}

TEST_CASE("config validation rejects bad values") {
  gln::ExperimentConfig c;
  c.family = "nope";
  CHECK_THROWS(c.validate());
  c = {};
  c.variant = "c3";
  CHECK_THROWS(c.validate());
  c = {};
  c.epsilon = 1.5;
  CHECK_THROWS(c.validate());
  c = {};
  c.psi1 = 0;
  c.psi2 = 0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("sha1 known vectors") {
  CHECK(gln::sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(gln::sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(gln::sha1_hex("The quick brown fox jumps over the lazy dog") ==
        "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("git blob hash matches git's convention") {
  // echo -n "hello" | git hash-object --stdin
  std::string path = "git_blob_hash_test.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "hello";
  }
  CHECK(gln::git_blob_hash(path) == "b6fc4c620b67d95f953a5c1c1230aaab5db5a1b0");
  std::remove(path.c_str());
}
