// Procedural generators for the three synthetic graph families: sampled 3-D
// surfaces, relaxed-caveman communities, and segmented figure images. All are
// pure functions of (spec, seed).
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gln/graph.hpp"
#include "gln/matrix.hpp"
#include "gln/rng.hpp"

namespace gln {

// ---- 3-D surfaces ---------------------------------------------------------

enum class SurfaceKind {
  Ellipsoid,
  EllipticHyperboloid,
  EllipticParaboloid,
  Saddle,
  Torus,
  SineRadial,
};

inline const std::array<SurfaceKind, 6>& all_surface_kinds() {
  static const std::array<SurfaceKind, 6> kinds = {
      SurfaceKind::Ellipsoid,         SurfaceKind::EllipticHyperboloid,
      SurfaceKind::EllipticParaboloid, SurfaceKind::Saddle,
      SurfaceKind::Torus,             SurfaceKind::SineRadial,
  };
  return kinds;
}

inline std::string surface_kind_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Ellipsoid: return "ellipsoid";
    case SurfaceKind::EllipticHyperboloid: return "elliptic_hyperboloid";
    case SurfaceKind::EllipticParaboloid: return "elliptic_paraboloid";
    case SurfaceKind::Saddle: return "saddle";
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::SineRadial: return "sine_radial";
  }
  throw std::runtime_error("unknown surface kind");
}

inline SurfaceKind surface_kind_from_name(const std::string& s) {
  for (SurfaceKind k : all_surface_kinds())
    if (surface_kind_name(k) == s) return k;
  throw std::runtime_error("unknown surface kind: " + s);
}

// Which affine pieces may enter the random transform.
struct TransformOptions {
  bool scaling = true;
  bool translation = true;
  bool rotation = true;
  bool reflection = true;
  bool shearing = true;

  static TransformOptions none() { return {false, false, false, false, false}; }
};

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::Torus;
  double a = 1.0, b = 1.0, c = 1.0;  // semi-axes / curvature levels
  double R = 2.0, r = 1.0;           // torus radii
  double h = 1.0;                    // sine height
  int u_steps = 10;
  int v_steps = 10;
  TransformOptions transform;
};

namespace detail {

struct Affine {
  // x -> L x + t
  std::array<std::array<double, 3>, 3> linear;
  std::array<double, 3> offset;
};

inline Affine identity_affine() {
  Affine t;
  t.linear = {{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
  t.offset = {0, 0, 0};
  return t;
}

inline std::array<std::array<double, 3>, 3> mat3_mul(const std::array<std::array<double, 3>, 3>& a,
                                                     const std::array<std::array<double, 3>, 3>& b) {
  std::array<std::array<double, 3>, 3> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline double mat3_det(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Composition L = rotation * shear * reflection * scale, each piece included
// with probability 1/2; translation drawn in [-1,1]^3.
inline Affine random_affine(Rng& rng, const TransformOptions& opts) {
  while (true) {
    Affine t = identity_affine();
    bool use_scale = opts.scaling && rng.coin();
    bool use_refl = opts.reflection && rng.coin();
    bool use_shear = opts.shearing && rng.coin();
    bool use_rot = opts.rotation && rng.coin();
    bool use_trans = opts.translation && rng.coin();

    auto L = identity_affine().linear;
    if (use_scale) {
      for (int i = 0; i < 3; ++i) L[i][i] = rng.uniform(0.5, 2.0);
    }
    if (use_refl) {
      std::array<std::array<double, 3>, 3> f{{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
      for (int i = 0; i < 3; ++i) f[i][i] = rng.coin() ? -1.0 : 1.0;
      L = mat3_mul(f, L);
    }
    if (use_shear) {
      std::array<std::array<double, 3>, 3> s{{{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}};
      s[0][1] = rng.uniform(-0.3, 0.3);
      s[0][2] = rng.uniform(-0.3, 0.3);
      s[1][2] = rng.uniform(-0.3, 0.3);
      L = mat3_mul(s, L);
    }
    if (use_rot) {
      // uniform rotation via normalized quaternion
      double q0 = rng.normal(), q1 = rng.normal(), q2 = rng.normal(), q3 = rng.normal();
      double norm = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
      if (norm == 0.0) continue;
      q0 /= norm; q1 /= norm; q2 /= norm; q3 /= norm;
      std::array<std::array<double, 3>, 3> rot = {{
          {{1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)}},
          {{2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1)}},
          {{2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2)}},
      }};
      L = mat3_mul(rot, L);
    }
    t.linear = L;
    if (use_trans)
      for (int i = 0; i < 3; ++i) t.offset[i] = rng.uniform(-1.0, 1.0);

    if (std::abs(mat3_det(t.linear)) < 1e-9) continue;  // degenerate; redraw
    return t;
  }
}

inline std::array<double, 3> apply_affine(const Affine& t, const std::array<double, 3>& p) {
  std::array<double, 3> out = t.offset;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += t.linear[i][j] * p[j];
  return out;
}

}  // namespace detail

// Point on the surface at grid coordinates (iu, iv), before the affine
// transform. Parameter ranges per kind:
//   ellipsoid   u = longitude in [0, 2pi) (wraps), v = latitude interior to (0, pi)
//   torus       u, v = both angles in [0, 2pi) (both wrap)
//   paraboloid / saddle   x, y in [-1.5, 1.5]
//   hyperboloid (one sheet, + branch)  x in [a, 2a], y in [-b, b]
//   sine_radial x, y in [-2pi, 2pi]
inline std::array<double, 3> surface_point(const SurfaceSpec& spec, int iu, int iv) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  auto lin = [](double lo, double hi, int i, int steps) {
    return steps == 1 ? lo : lo + (hi - lo) * i / static_cast<double>(steps - 1);
  };
  switch (spec.kind) {
    case SurfaceKind::Ellipsoid: {
      double u = kTwoPi * iu / spec.u_steps;  // wraps, endpoint excluded
      double v = std::numbers::pi * (iv + 1) / (spec.v_steps + 1);
      return {spec.a * std::sin(v) * std::cos(u), spec.b * std::sin(v) * std::sin(u),
              spec.c * std::cos(v)};
    }
    case SurfaceKind::Torus: {
      double u = kTwoPi * iu / spec.u_steps;
      double v = kTwoPi * iv / spec.v_steps;
      return {(spec.R + spec.r * std::cos(v)) * std::cos(u),
              (spec.R + spec.r * std::cos(v)) * std::sin(u), spec.r * std::sin(v)};
    }
    case SurfaceKind::EllipticParaboloid: {
      double x = lin(-1.5, 1.5, iu, spec.u_steps);
      double y = lin(-1.5, 1.5, iv, spec.v_steps);
      return {x, y, x * x / (spec.a * spec.a) + y * y / (spec.b * spec.b)};
    }
    case SurfaceKind::Saddle: {
      double x = lin(-1.5, 1.5, iu, spec.u_steps);
      double y = lin(-1.5, 1.5, iv, spec.v_steps);
      return {x, y, x * x / (spec.a * spec.a) - y * y / (spec.b * spec.b)};
    }
    case SurfaceKind::EllipticHyperboloid: {
      double x = lin(spec.a, 2.0 * spec.a, iu, spec.u_steps);
      double y = lin(-spec.b, spec.b, iv, spec.v_steps);
      double rad = x * x / (spec.a * spec.a) + y * y / (spec.b * spec.b) - 1.0;
      return {x, y, spec.c * std::sqrt(std::max(0.0, rad))};
    }
    case SurfaceKind::SineRadial: {
      double x = lin(-kTwoPi, kTwoPi, iu, spec.u_steps);
      double y = lin(-kTwoPi, kTwoPi, iv, spec.v_steps);
      return {x, y, spec.h * std::sin(std::sqrt(x * x + y * y))};
    }
  }
  throw std::runtime_error("unknown surface kind");
}

inline bool surface_wraps_u(SurfaceKind k) {
  return k == SurfaceKind::Torus || k == SurfaceKind::Ellipsoid;
}

inline bool surface_wraps_v(SurfaceKind k) { return k == SurfaceKind::Torus; }

// Regular u x v mesh mapped through the parametric form, then a seeded random
// affine transform. Features are the 3-D coordinates; edges are the 4-neighbor
// mesh with wraparound along periodic coordinates only.
inline GraphSample gen_surface(const SurfaceSpec& spec, uint64_t seed) {
  Rng rng(seed);
  detail::Affine t = detail::random_affine(rng, spec.transform);
  int gu = spec.u_steps, gv = spec.v_steps;
  int n = gu * gv;
  auto node = [gv](int iu, int iv) { return iu * gv + iv; };

  GraphSample s;
  s.family = "surface";
  s.variant = surface_kind_name(spec.kind);
  s.seed = seed;
  s.features = DenseMatrix(n, 3);
  for (int iu = 0; iu < gu; ++iu) {
    for (int iv = 0; iv < gv; ++iv) {
      auto p = detail::apply_affine(t, surface_point(spec, iu, iv));
      for (int c = 0; c < 3; ++c) s.features(node(iu, iv), c) = p[c];
    }
  }

  s.adjacency = DenseMatrix(n, n);
  auto connect = [&](int x, int y) {
    if (x == y) return;
    s.adjacency(x, y) = 1.0;
    s.adjacency(y, x) = 1.0;
  };
  bool wu = surface_wraps_u(spec.kind), wv = surface_wraps_v(spec.kind);
  for (int iu = 0; iu < gu; ++iu) {
    for (int iv = 0; iv < gv; ++iv) {
      if (iu + 1 < gu) connect(node(iu, iv), node(iu + 1, iv));
      else if (wu && gu > 2) connect(node(iu, iv), node(0, iv));
      if (iv + 1 < gv) connect(node(iu, iv), node(iu, iv + 1));
      else if (wv && gv > 2) connect(node(iu, iv), node(iu, 0));
    }
  }
  validate_sample(s);
  return s;
}

// ---- communities ----------------------------------------------------------

struct CommunitySpec {
  int communities = 2;        // C
  int community_size = 20;    // people per community
  double p_rewire = 0.05;     // relaxed-caveman rewiring probability
  double blob_radius = 5.0;   // feature blob centers sit on this circle
  double blob_std = 0.5;
};

// C cliques of 20, then each intra-clique edge is independently moved, with
// probability p_rewire, to a uniformly random node outside its clique
// (duplicates and self-loops rejected). When p_rewire > 0 every clique is
// guaranteed at least one outgoing rewire. Edge count is conserved. Features
// are 2-D Gaussian blob positions, one blob per community.
inline GraphSample gen_community(const CommunitySpec& spec, uint64_t seed) {
  Rng rng(seed);
  int C = spec.communities;
  int size = spec.community_size;
  int n = C * size;

  GraphSample s;
  s.family = "community";
  s.variant = "c" + std::to_string(C);
  s.seed = seed;
  s.adjacency = DenseMatrix(n, n);
  auto community_of = [size](int v) { return v / size; };
  auto set_edge = [&](int x, int y, double val) {
    s.adjacency(x, y) = val;
    s.adjacency(y, x) = val;
  };

  for (int c = 0; c < C; ++c)
    for (int i = c * size; i < (c + 1) * size; ++i)
      for (int j = i + 1; j < (c + 1) * size; ++j) set_edge(i, j, 1.0);

  if (spec.p_rewire > 0.0 && C > 1) {
    std::vector<int> rewires_per_clique(C, 0);
    auto rewire_edge = [&](int i, int j) {
      // move (i, j) to (i, w) with w outside i's clique
      set_edge(i, j, 0.0);
      int ci = community_of(i);
      while (true) {
        int w = rng.uniform_int(0, n - 1);
        if (community_of(w) == ci || w == i) continue;
        if (s.adjacency(i, w) != 0.0) continue;
        set_edge(i, w, 1.0);
        break;
      }
      ++rewires_per_clique[ci];
    };

    for (int c = 0; c < C; ++c) {
      for (int i = c * size; i < (c + 1) * size; ++i) {
        for (int j = i + 1; j < (c + 1) * size; ++j) {
          if (s.adjacency(i, j) != 0.0 && rng.uniform() < spec.p_rewire) rewire_edge(i, j);
        }
      }
    }
    // connectivity guarantee: at least one rewire out of every clique
    for (int c = 0; c < C; ++c) {
      if (rewires_per_clique[c] > 0) continue;
      while (true) {
        int i = rng.uniform_int(c * size, (c + 1) * size - 1);
        int j = rng.uniform_int(c * size, (c + 1) * size - 1);
        if (i == j || s.adjacency(i, j) == 0.0) continue;
        rewire_edge(std::min(i, j), std::max(i, j));
        break;
      }
    }
  }

  s.features = DenseMatrix(n, 2);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (int v = 0; v < n; ++v) {
    int c = community_of(v);
    double cx = spec.blob_radius * std::cos(kTwoPi * c / C);
    double cy = spec.blob_radius * std::sin(kTwoPi * c / C);
    s.features(v, 0) = rng.normal(cx, spec.blob_std);
    s.features(v, 1) = rng.normal(cy, spec.blob_std);
  }
  validate_sample(s);
  return s;
}

// ---- figure images --------------------------------------------------------

struct FigureImageSpec {
  int image_side = 20;      // n = side^2 nodes
  int min_figures = 1;
  int max_figures = 3;
  double noise_std = 0.02;  // white noise added to RGB
  double min_color_dist = 0.2;
};

namespace detail {

struct Figure {
  enum class Kind { Circle, Rectangle, Line } kind;
  double cx, cy, radius;        // circle
  int r0, c0, height, width;    // rectangle
  bool horizontal;              // line
  int line_index;
};

// Paint order is back to front; later figures overwrite earlier ones.
inline void paint_figure(std::vector<int>& layer, int side, const Figure& f, int id) {
  auto at = [&](int r, int c) -> int& { return layer[r * side + c]; };
  switch (f.kind) {
    case Figure::Kind::Circle:
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
          double dr = r - f.cy, dc = c - f.cx;
          if (dr * dr + dc * dc <= f.radius * f.radius) at(r, c) = id;
        }
      break;
    case Figure::Kind::Rectangle:
      for (int r = f.r0; r < f.r0 + f.height; ++r)
        for (int c = f.c0; c < f.c0 + f.width; ++c) at(r, c) = id;
      break;
    case Figure::Kind::Line:
      if (f.horizontal)
        for (int c = 0; c < side; ++c) at(f.line_index, c) = id;
      else
        for (int r = 0; r < side; ++r) at(r, f.line_index) = id;
      break;
  }
}

// Relabel the painted layer map into per-region segment ids: connected
// components (4-connectivity) of equal paint value. Makes segment ids and
// graph components correspond one to one even when a figure splits the
// background or occludes another.
inline std::vector<int> segment_regions(const std::vector<int>& layer, int side) {
  std::vector<int> segment(layer.size(), -1);
  int next_id = 0;
  for (size_t start = 0; start < layer.size(); ++start) {
    if (segment[start] != -1) continue;
    int id = next_id++;
    std::queue<int> frontier;
    frontier.push(static_cast<int>(start));
    segment[start] = id;
    while (!frontier.empty()) {
      int p = frontier.front();
      frontier.pop();
      int r = p / side, c = p % side;
      const int dr[4] = {-1, 1, 0, 0};
      const int dc[4] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        int nr = r + dr[d], nc = c + dc[d];
        if (nr < 0 || nr >= side || nc < 0 || nc >= side) continue;
        int q = nr * side + nc;
        if (segment[q] == -1 && layer[q] == layer[p]) {
          segment[q] = id;
          frontier.push(q);
        }
      }
    }
  }
  return segment;
}

}  // namespace detail

// RGB canvas with randomly placed figures that always fit the canvas, plus
// white noise on the colors. Nodes are pixels; an edge joins 4-neighbor
// pixels iff they belong to the same segment region.
inline GraphSample gen_figure_image(const FigureImageSpec& spec, uint64_t seed) {
  Rng rng(seed);
  int side = spec.image_side;
  int n = side * side;

  int n_figures = spec.min_figures >= spec.max_figures
                      ? spec.min_figures
                      : rng.uniform_int(spec.min_figures, spec.max_figures);
  std::vector<int> layer(n, 0);  // 0 = background
  for (int f = 0; f < n_figures; ++f) {
    detail::Figure fig{};
    int kind = rng.uniform_int(0, 2);
    if (kind == 0) {
      fig.kind = detail::Figure::Kind::Circle;
      // diameter in [1, side]; placed so the disc stays inside the canvas
      fig.radius = rng.uniform(0.5, side / 2.0);
      while (fig.radius > (side - 1) / 2.0) fig.radius = rng.uniform(0.5, side / 2.0);
      fig.cx = rng.uniform(fig.radius, side - 1 - fig.radius);
      fig.cy = rng.uniform(fig.radius, side - 1 - fig.radius);
    } else if (kind == 1) {
      fig.kind = detail::Figure::Kind::Rectangle;
      fig.height = rng.uniform_int(1, side);
      fig.width = rng.uniform_int(1, side);
      fig.r0 = rng.uniform_int(0, side - fig.height);
      fig.c0 = rng.uniform_int(0, side - fig.width);
    } else {
      fig.kind = detail::Figure::Kind::Line;
      fig.horizontal = rng.coin();
      fig.line_index = rng.uniform_int(1, side - 2);  // keeps both sides nonempty
    }
    detail::paint_figure(layer, side, fig, f + 1);
  }

  std::vector<int> segment = detail::segment_regions(layer, side);
  int n_regions = 0;
  for (int s : segment) n_regions = std::max(n_regions, s + 1);

  // Distinct region colors: rejection-sampled for minimum pairwise distance.
  std::vector<std::array<double, 3>> colors;
  for (int reg = 0; reg < n_regions; ++reg) {
    std::array<double, 3> best{};
    for (int attempt = 0; attempt < 256; ++attempt) {
      std::array<double, 3> cand = {rng.uniform(), rng.uniform(), rng.uniform()};
      bool ok = true;
      for (const auto& c : colors) {
        double d2 = 0.0;
        for (int t = 0; t < 3; ++t) d2 += (cand[t] - c[t]) * (cand[t] - c[t]);
        if (d2 < spec.min_color_dist * spec.min_color_dist) {
          ok = false;
          break;
        }
      }
      best = cand;
      if (ok) break;
    }
    colors.push_back(best);
  }

  GraphSample s;
  s.family = "figures";
  s.variant = "default";
  s.seed = seed;
  s.features = DenseMatrix(n, 3);
  for (int p = 0; p < n; ++p) {
    for (int t = 0; t < 3; ++t) {
      double v = colors[segment[p]][t];
      if (spec.noise_std > 0.0) v += rng.normal(0.0, spec.noise_std);
      s.features(p, t) = std::min(1.0, std::max(0.0, v));
    }
  }

  s.adjacency = DenseMatrix(n, n);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      int p = r * side + c;
      if (c + 1 < side && segment[p] == segment[p + 1]) {
        s.adjacency(p, p + 1) = 1.0;
        s.adjacency(p + 1, p) = 1.0;
      }
      if (r + 1 < side && segment[p] == segment[p + side]) {
        s.adjacency(p, p + side) = 1.0;
        s.adjacency(p + side, p) = 1.0;
      }
    }
  }
  validate_sample(s);
  return s;
}

// ---- splits and initial structure ------------------------------------------

// Seeded shuffle then split; train gets floor(train_fraction * N).
inline std::pair<std::vector<GraphSample>, std::vector<GraphSample>> split_dataset(
    const std::vector<GraphSample>& samples, double train_fraction, uint64_t seed) {
  if (samples.size() < 2) throw std::invalid_argument("split_dataset: need at least 2 samples");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split_dataset: train_fraction must lie in (0,1)");
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  size_t n_train = static_cast<size_t>(train_fraction * samples.size());
  n_train = std::min(std::max<size_t>(n_train, 1), samples.size() - 1);
  std::pair<std::vector<GraphSample>, std::vector<GraphSample>> out;
  for (size_t i = 0; i < order.size(); ++i)
    (i < n_train ? out.first : out.second).push_back(samples[order[i]]);
  return out;
}

enum class InitialAdjacencyMode { Identity, RandomProportion };

// identity: I_n. random_proportion: floor(p n(n-1)/2) distinct undirected
// pairs set in both triangles, plus the identity diagonal.
inline DenseMatrix make_initial_adjacency(int n, InitialAdjacencyMode mode, double p = 0.0,
                                          uint64_t seed = 0) {
  DenseMatrix a = DenseMatrix::identity(n);
  if (mode == InitialAdjacencyMode::Identity) return a;
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("make_initial_adjacency: p must lie in [0,1]");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  long long want = static_cast<long long>(p * pairs.size());
  Rng rng(seed);
  // partial Fisher-Yates: the first `want` positions are a uniform sample
  for (long long i = 0; i < want; ++i) {
    int j = rng.uniform_int(static_cast<int>(i), static_cast<int>(pairs.size()) - 1);
    std::swap(pairs[i], pairs[j]);
    a(pairs[i].first, pairs[i].second) = 1.0;
    a(pairs[i].second, pairs[i].first) = 1.0;
  }
  return a;
}

}  // namespace gln
