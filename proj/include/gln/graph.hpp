// GraphSample: node features plus binary symmetric ground-truth adjacency,
// with a newline-delimited JSON on-disk format (one object per sample).
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gln/matrix.hpp"

namespace gln {

struct GraphSample {
  std::string family;
  std::string variant;
  uint64_t seed = 0;
  DenseMatrix features;   // n x d0
  DenseMatrix adjacency;  // n x n binary symmetric, zero diagonal

  int n() const { return adjacency.rows(); }
  int feature_dim() const { return features.cols(); }
};

inline void validate_sample(const GraphSample& s) {
  if (s.adjacency.rows() != s.adjacency.cols())
    throw InvalidAdjacencyError("sample adjacency not square: " + s.adjacency.shape());
  if (s.features.rows() != s.adjacency.rows())
    throw DimensionError("sample features rows " + std::to_string(s.features.rows()) +
                         " != node count " + std::to_string(s.adjacency.rows()));
  if (!all_finite(s.features)) throw ContractError("sample features contain non-finite values");
  const DenseMatrix& a = s.adjacency;
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) throw InvalidAdjacencyError("sample adjacency has nonzero diagonal");
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0 && a(i, j) != 1.0)
        throw InvalidAdjacencyError("sample adjacency not binary");
      if (a(i, j) != a(j, i)) throw InvalidAdjacencyError("sample adjacency not symmetric");
    }
  }
}

inline std::vector<std::pair<int, int>> edge_list(const DenseMatrix& a) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0) edges.emplace_back(i, j);
  return edges;
}

inline DenseMatrix adjacency_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  DenseMatrix a(n, n);
  for (auto [i, j] : edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

inline nlohmann::json sample_to_json(const GraphSample& s) {
  nlohmann::json j;
  j["family"] = s.family;
  j["variant"] = s.variant;
  j["n"] = s.n();
  j["d"] = s.feature_dim();
  std::vector<double> flat(s.features.data(), s.features.data() + s.features.size());
  j["features"] = std::move(flat);
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : edge_list(s.adjacency)) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["seed"] = s.seed;
  return j;
}

inline GraphSample sample_from_json(const nlohmann::json& j) {
  GraphSample s;
  s.family = j.at("family").get<std::string>();
  s.variant = j.at("variant").get<std::string>();
  s.seed = j.at("seed").get<uint64_t>();
  int n = j.at("n").get<int>();
  int d = j.at("d").get<int>();
  std::vector<double> flat = j.at("features").get<std::vector<double>>();
  s.features = DenseMatrix(n, d, std::move(flat));
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  s.adjacency = adjacency_from_edges(n, edges);
  validate_sample(s);
  return s;
}

inline void save_dataset(const std::vector<GraphSample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  for (const GraphSample& s : samples) out << sample_to_json(s).dump() << "\n";
}

inline std::vector<GraphSample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset: " + path);
  std::vector<GraphSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    samples.push_back(sample_from_json(nlohmann::json::parse(line)));
  }
  return samples;
}

}  // namespace gln
