#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <queue>
#include <set>

#include "gln/datasets.hpp"

using gln::DenseMatrix;
using gln::GraphSample;

namespace {

int count_edges(const DenseMatrix& a) {
  int edges = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0) ++edges;
  return edges;
}

int component_count(const DenseMatrix& a) {
  int n = a.rows();
  std::vector<bool> seen(n, false);
  int comps = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++comps;
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (a(u, v) != 0.0 && !seen[v]) {
          seen[v] = true;
          q.push(v);
        }
    }
  }
  return comps;
}

}  // namespace

TEST_CASE("saddle on a 2x2 grid with identity transform") {
  gln::SurfaceSpec spec;
  spec.kind = gln::SurfaceKind::Saddle;
  spec.a = spec.b = 1.0;
  spec.u_steps = spec.v_steps = 2;
  spec.transform = gln::TransformOptions::none();
  GraphSample s = gln::gen_surface(spec, 1);
  CHECK(s.n() == 4);
  CHECK(count_edges(s.adjacency) == 4);
  for (int v = 0; v < 4; ++v) {
    double x = s.features(v, 0), y = s.features(v, 1), z = s.features(v, 2);
    CHECK(z == Catch::Approx(x * x - y * y).margin(1e-12));
  }
}

TEST_CASE("node count is the grid size for any surface") {
  for (gln::SurfaceKind kind : gln::all_surface_kinds()) {
    gln::SurfaceSpec spec;
    spec.kind = kind;
    spec.u_steps = 5;
    spec.v_steps = 4;
    GraphSample s = gln::gen_surface(spec, 3);
    CHECK(s.n() == 20);
  }
}

TEST_CASE("torus point at parameter origin and implicit equation") {
  gln::SurfaceSpec spec;
  spec.kind = gln::SurfaceKind::Torus;
  spec.R = 2.0;
  spec.r = 1.0;
  spec.u_steps = spec.v_steps = 10;
  spec.transform = gln::TransformOptions::none();
  GraphSample s = gln::gen_surface(spec, 5);
  CHECK(s.features(0, 0) == Catch::Approx(3.0).margin(1e-12));
  CHECK(s.features(0, 1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(s.features(0, 2) == Catch::Approx(0.0).margin(1e-12));
  for (int v = 0; v < s.n(); ++v) {
    double x = s.features(v, 0), y = s.features(v, 1), z = s.features(v, 2);
    double lhs = std::pow(std::sqrt(x * x + y * y) - spec.R, 2) + z * z;
    CHECK(lhs == Catch::Approx(spec.r * spec.r).margin(1e-10));
  }
  // 10x10 doubly periodic grid is 4-regular
  for (int v = 0; v < s.n(); ++v) {
    int deg = 0;
    for (int u = 0; u < s.n(); ++u) deg += s.adjacency(v, u) != 0.0 ? 1 : 0;
    CHECK(deg == 4);
  }
}

TEST_CASE("surfaces satisfy their implicit equations before transform") {
  auto check_all = [](const gln::SurfaceSpec& spec, auto&& fn) {
    GraphSample s = gln::gen_surface(spec, 9);
    for (int v = 0; v < s.n(); ++v)
      fn(s.features(v, 0), s.features(v, 1), s.features(v, 2));
  };
  gln::SurfaceSpec spec;
  spec.u_steps = spec.v_steps = 5;
  spec.transform = gln::TransformOptions::none();
  spec.a = 1.0;
  spec.b = 1.5;
  spec.c = 2.0;

  spec.kind = gln::SurfaceKind::Ellipsoid;
  check_all(spec, [&](double x, double y, double z) {
    CHECK(x * x / (spec.a * spec.a) + y * y / (spec.b * spec.b) + z * z / (spec.c * spec.c) ==
          Catch::Approx(1.0).margin(1e-10));
  });
  spec.kind = gln::SurfaceKind::EllipticHyperboloid;
  check_all(spec, [&](double x, double y, double z) {
    CHECK(x * x / (spec.a * spec.a) + y * y / (spec.b * spec.b) - z * z / (spec.c * spec.c) ==
          Catch::Approx(1.0).margin(1e-10));
  });
  spec.kind = gln::SurfaceKind::EllipticParaboloid;
  check_all(spec, [&](double x, double y, double z) {
    CHECK(x * x / (spec.a * spec.a) + y * y / (spec.b * spec.b) ==
          Catch::Approx(z).margin(1e-10));
  });
  spec.kind = gln::SurfaceKind::SineRadial;
  spec.h = 1.7;
  check_all(spec, [&](double x, double y, double z) {
    CHECK(spec.h * std::sin(std::sqrt(x * x + y * y)) == Catch::Approx(z).margin(1e-10));
  });
}

TEST_CASE("surface graphs are connected at both resolutions") {
  for (gln::SurfaceKind kind : gln::all_surface_kinds()) {
    for (int res : {100, 400}) {
      gln::SurfaceSpec spec;
      spec.kind = kind;
      spec.u_steps = res == 100 ? 10 : 20;
      spec.v_steps = spec.u_steps;
      GraphSample s = gln::gen_surface(spec, 11);
      CHECK(s.n() == res);
      CHECK(component_count(s.adjacency) == 1);
    }
  }
}

TEST_CASE("surface generation is deterministic in the seed") {
  gln::SurfaceSpec spec;
  spec.kind = gln::SurfaceKind::Ellipsoid;
  GraphSample a = gln::gen_surface(spec, 77);
  GraphSample b = gln::gen_surface(spec, 77);
  CHECK(a.features == b.features);
  CHECK(a.adjacency == b.adjacency);
  GraphSample c = gln::gen_surface(spec, 78);
  CHECK_FALSE(a.features == c.features);
}

TEST_CASE("pure caveman: two disjoint twenty-cliques") {
  gln::CommunitySpec spec;
  spec.p_rewire = 0.0;
  GraphSample s = gln::gen_community(spec, 1);
  CHECK(s.n() == 40);
  for (int v = 0; v < 40; ++v) {
    int deg = 0;
    for (int u = 0; u < 40; ++u) deg += s.adjacency(v, u) != 0.0 ? 1 : 0;
    CHECK(deg == 19);
  }
  // no cross-community edges
  for (int i = 0; i < 20; ++i)
    for (int j = 20; j < 40; ++j) CHECK(s.adjacency(i, j) == 0.0);
  CHECK(count_edges(s.adjacency) == 380);
}

TEST_CASE("relaxed caveman conserves the edge count and connects communities") {
  for (int C : {2, 4}) {
    gln::CommunitySpec spec;
    spec.communities = C;
    spec.p_rewire = 0.05;
    for (uint64_t seed = 0; seed < 10; ++seed) {
      GraphSample s = gln::gen_community(spec, seed);
      CHECK(s.n() == 20 * C);
      CHECK(count_edges(s.adjacency) == C * 190);
      CHECK(component_count(s.adjacency) == 1);
    }
  }
}

TEST_CASE("community features cluster by community") {
  gln::CommunitySpec spec;
  GraphSample s = gln::gen_community(spec, 3);
  // all nodes of one community sit within a few stds of their blob center
  double cx0 = 5.0, cy0 = 0.0;
  for (int v = 0; v < 20; ++v) {
    CHECK(std::abs(s.features(v, 0) - cx0) < 5 * 0.5);
    CHECK(std::abs(s.features(v, 1) - cy0) < 5 * 0.5);
  }
}

TEST_CASE("blank canvas yields the full grid graph") {
  gln::FigureImageSpec spec;
  spec.min_figures = 0;
  spec.max_figures = 0;
  spec.noise_std = 0.0;
  GraphSample s = gln::gen_figure_image(spec, 1);
  CHECK(s.n() == 400);
  CHECK(count_edges(s.adjacency) == 2 * 20 * 19);
  CHECK(component_count(s.adjacency) == 1);
}

TEST_CASE("figure image degree is at most four") {
  gln::FigureImageSpec spec;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    GraphSample s = gln::gen_figure_image(spec, seed);
    for (int v = 0; v < s.n(); ++v) {
      int deg = 0;
      for (int u = 0; u < s.n(); ++u) deg += s.adjacency(v, u) != 0.0 ? 1 : 0;
      CHECK(deg <= 4);
    }
  }
}

TEST_CASE("graph components match distinct colors when noise is off") {
  gln::FigureImageSpec spec;
  spec.noise_std = 0.0;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    GraphSample s = gln::gen_figure_image(spec, seed);
    std::set<std::array<double, 3>> colors;
    for (int v = 0; v < s.n(); ++v)
      colors.insert({s.features(v, 0), s.features(v, 1), s.features(v, 2)});
    CHECK(component_count(s.adjacency) == static_cast<int>(colors.size()));
  }
}

TEST_CASE("figure generation determinism") {
  gln::FigureImageSpec spec;
  GraphSample a = gln::gen_figure_image(spec, 42);
  GraphSample b = gln::gen_figure_image(spec, 42);
  CHECK(a.features == b.features);
  CHECK(a.adjacency == b.adjacency);
}

TEST_CASE("split_dataset basics") {
  gln::CommunitySpec spec;
  std::vector<GraphSample> samples;
  for (uint64_t s = 0; s < 10; ++s) samples.push_back(gln::gen_community(spec, s));

  auto [train, test] = gln::split_dataset(samples, 0.8, 5);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);

  // union is the original multiset (match by seed)
  std::multiset<uint64_t> seeds;
  for (const auto& s : train) seeds.insert(s.seed);
  for (const auto& s : test) seeds.insert(s.seed);
  std::multiset<uint64_t> expect;
  for (uint64_t s = 0; s < 10; ++s) expect.insert(s);
  CHECK(seeds == expect);

  auto [train2, test2] = gln::split_dataset(samples, 0.8, 5);
  for (size_t i = 0; i < train.size(); ++i) CHECK(train[i].seed == train2[i].seed);

  CHECK_THROWS_AS(gln::split_dataset({samples[0]}, 0.8, 1), std::invalid_argument);
}

TEST_CASE("make_initial_adjacency") {
  using gln::InitialAdjacencyMode;
  CHECK(gln::make_initial_adjacency(3, InitialAdjacencyMode::Identity) ==
        DenseMatrix::identity(3));

  DenseMatrix full = gln::make_initial_adjacency(5, InitialAdjacencyMode::RandomProportion, 1.0, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(full(i, j) == 1.0);

  DenseMatrix half = gln::make_initial_adjacency(40, InitialAdjacencyMode::RandomProportion, 0.5, 7);
  int edges = 0;
  for (int i = 0; i < 40; ++i) {
    CHECK(half(i, i) == 1.0);
    for (int j = i + 1; j < 40; ++j) {
      CHECK(half(i, j) == half(j, i));
      edges += half(i, j) != 0.0 ? 1 : 0;
    }
  }
  CHECK(edges == 390);  // floor(0.5 * 780)

  DenseMatrix again = gln::make_initial_adjacency(40, InitialAdjacencyMode::RandomProportion, 0.5, 7);
  CHECK(again == half);
}

TEST_CASE("dataset files round-trip") {
  std::vector<GraphSample> samples;
  gln::CommunitySpec cspec;
  samples.push_back(gln::gen_community(cspec, 1));
  samples.push_back(gln::gen_community(cspec, 2));
  std::string path = "dataset_roundtrip_test.ndjson";
  gln::save_dataset(samples, path);
  std::vector<GraphSample> loaded = gln::load_dataset(path);
  std::remove(path.c_str());
  REQUIRE(loaded.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(loaded[i].family == samples[i].family);
    CHECK(loaded[i].variant == samples[i].variant);
    CHECK(loaded[i].seed == samples[i].seed);
    CHECK(loaded[i].features == samples[i].features);
    CHECK(loaded[i].adjacency == samples[i].adjacency);
  }
}
