// GLN parameters: per recurrent step, k graph-convolution kernels W, the
// local/global/merge transforms U, Z, Q and the node-indexed adjacency
// projection M. M being n x n ties a model to a fixed node count.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gln/matrix.hpp"
#include "gln/rng.hpp"

namespace gln {

enum class Activation { Sigmoid, Tanh, Identity };

inline std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
  }
  return "sigmoid";
}

// Defaults: sigmoid everywhere, tanh for the global-context broadcast.
struct ActivationSchedule {
  Activation eta = Activation::Sigmoid;
  Activation lambda = Activation::Sigmoid;
  Activation gamma = Activation::Tanh;
  Activation rho = Activation::Sigmoid;
};

struct GlnLayerParams {
  std::vector<DenseMatrix> W;  // k kernels, each d_l x d_{l+1}
  DenseMatrix U;               // d_{l+1} x d_{l+1}
  DenseMatrix Z;               // d_{l+1} x d_{l+1}
  DenseMatrix Q;               // d_{l+1} x d_{l+1}
  DenseMatrix M;               // n x n
};

struct GlnModel {
  std::vector<int> dims;  // d_0 .. d_L
  int n = 0;
  int k = 1;
  double epsilon = 0.5;
  ActivationSchedule acts;
  std::vector<GlnLayerParams> layers;

  int depth() const { return static_cast<int>(layers.size()); }

  void validate() const {
    if (static_cast<int>(dims.size()) != depth() + 1)
      throw ContractError("GlnModel: dims must have L+1 entries");
    if (k < 1) throw ContractError("GlnModel: k must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw ContractError("GlnModel: epsilon must lie in (0,1)");
    for (int l = 0; l < depth(); ++l) {
      const GlnLayerParams& p = layers[l];
      if (static_cast<int>(p.W.size()) != k)
        throw ContractError("GlnModel: layer " + std::to_string(l) + " has wrong kernel count");
      for (const DenseMatrix& w : p.W)
        if (w.rows() != dims[l] || w.cols() != dims[l + 1])
          throw ContractError("GlnModel: W shape mismatch at layer " + std::to_string(l));
      for (const DenseMatrix* m : {&p.U, &p.Z, &p.Q})
        if (m->rows() != dims[l + 1] || m->cols() != dims[l + 1])
          throw ContractError("GlnModel: square transform shape mismatch at layer " + std::to_string(l));
      if (p.M.rows() != n || p.M.cols() != n)
        throw ContractError("GlnModel: M shape mismatch at layer " + std::to_string(l));
    }
  }
};

inline DenseMatrix glorot_uniform(int rows, int cols, Rng& rng) {
  double bound = std::sqrt(6.0 / (rows + cols));
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

// W, U, Z, Q: Glorot-uniform. M: identity plus small uniform noise so early
// training passes structure through unchanged.
inline GlnModel make_gln_model(std::vector<int> dims, int n, int k, double epsilon,
                               uint64_t init_seed, ActivationSchedule acts = {}) {
  GlnModel model;
  model.dims = std::move(dims);
  model.n = n;
  model.k = k;
  model.epsilon = epsilon;
  model.acts = acts;
  Rng rng(init_seed);
  int L = static_cast<int>(model.dims.size()) - 1;
  for (int l = 0; l < L; ++l) {
    GlnLayerParams p;
    for (int i = 0; i < k; ++i)
      p.W.push_back(glorot_uniform(model.dims[l], model.dims[l + 1], rng));
    p.U = glorot_uniform(model.dims[l + 1], model.dims[l + 1], rng);
    p.Z = glorot_uniform(model.dims[l + 1], model.dims[l + 1], rng);
    p.Q = glorot_uniform(model.dims[l + 1], model.dims[l + 1], rng);
    p.M = DenseMatrix::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p.M(i, j) += rng.uniform(-0.01, 0.01);
    model.layers.push_back(std::move(p));
  }
  model.validate();
  return model;
}

// Canonical parameter order: layer by layer, W_1..W_k, U, Z, Q, M. The
// optimizer and the tape binding both rely on this enumeration.
inline std::vector<DenseMatrix*> parameter_refs(GlnModel& model) {
  std::vector<DenseMatrix*> refs;
  for (GlnLayerParams& p : model.layers) {
    for (DenseMatrix& w : p.W) refs.push_back(&w);
    refs.push_back(&p.U);
    refs.push_back(&p.Z);
    refs.push_back(&p.Q);
    refs.push_back(&p.M);
  }
  return refs;
}

inline std::vector<const DenseMatrix*> parameter_refs(const GlnModel& model) {
  std::vector<const DenseMatrix*> refs;
  for (const GlnLayerParams& p : model.layers) {
    for (const DenseMatrix& w : p.W) refs.push_back(&w);
    refs.push_back(&p.U);
    refs.push_back(&p.Z);
    refs.push_back(&p.Q);
    refs.push_back(&p.M);
  }
  return refs;
}

// ---- checkpoint serialization -------------------------------------------
// Versioned JSON document; numbers round-trip exactly (shortest decimal form
// that recovers the same double, <= 17 significant digits).

inline nlohmann::json matrix_to_json(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseMatrix matrix_from_json(const nlohmann::json& j) {
  int rows = static_cast<int>(j.size());
  if (rows == 0) throw ContractError("matrix_from_json: empty matrix");
  int cols = static_cast<int>(j.at(0).size());
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (static_cast<int>(row.size()) != cols)
      throw ContractError("matrix_from_json: ragged rows");
    for (int jx = 0; jx < cols; ++jx) m(i, jx) = row.at(jx).get<double>();
  }
  return m;
}

inline constexpr int kCheckpointFormatVersion = 1;

inline nlohmann::json checkpoint_to_json(const GlnModel& model) {
  nlohmann::json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["dims"] = model.dims;
  j["n"] = model.n;
  j["k"] = model.k;
  j["L"] = model.depth();
  j["epsilon"] = model.epsilon;
  nlohmann::json layers = nlohmann::json::array();
  for (const GlnLayerParams& p : model.layers) {
    nlohmann::json lj;
    nlohmann::json ws = nlohmann::json::array();
    for (const DenseMatrix& w : p.W) ws.push_back(matrix_to_json(w));
    lj["W"] = std::move(ws);
    lj["U"] = matrix_to_json(p.U);
    lj["Z"] = matrix_to_json(p.Z);
    lj["Q"] = matrix_to_json(p.Q);
    lj["M"] = matrix_to_json(p.M);
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

inline GlnModel checkpoint_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kCheckpointFormatVersion)
    throw std::runtime_error("checkpoint: unsupported format_version");
  GlnModel model;
  model.dims = j.at("dims").get<std::vector<int>>();
  model.n = j.at("n").get<int>();
  model.k = j.at("k").get<int>();
  model.epsilon = j.at("epsilon").get<double>();
  for (const auto& lj : j.at("layers")) {
    GlnLayerParams p;
    for (const auto& wj : lj.at("W")) p.W.push_back(matrix_from_json(wj));
    p.U = matrix_from_json(lj.at("U"));
    p.Z = matrix_from_json(lj.at("Z"));
    p.Q = matrix_from_json(lj.at("Q"));
    p.M = matrix_from_json(lj.at("M"));
    model.layers.push_back(std::move(p));
  }
  if (j.at("L").get<int>() != model.depth())
    throw std::runtime_error("checkpoint: L does not match layer count");
  model.validate();
  return model;
}

inline void save_checkpoint(const GlnModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << checkpoint_to_json(model).dump() << "\n";
}

inline GlnModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  return checkpoint_from_json(j);
}

}  // namespace gln
