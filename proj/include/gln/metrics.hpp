// Evaluation battery: degree / clustering / graphlet-orbit statistics, 1-D
// earth mover distance, Gaussian-kernel MMD between graph sets, and
// edge-classification metrics over unordered node pairs.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gln/matrix.hpp"

namespace gln {

inline void check_binary_adjacency(const DenseMatrix& a) {
  if (a.rows() != a.cols())
    throw InvalidAdjacencyError("adjacency must be square, got " + a.shape());
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) throw InvalidAdjacencyError("adjacency has nonzero diagonal");
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0 && a(i, j) != 1.0) throw InvalidAdjacencyError("adjacency not binary");
      if (a(i, j) != a(j, i)) throw InvalidAdjacencyError("adjacency not symmetric");
    }
  }
}

// Normalized histogram of node degrees over support 0..n-1.
inline std::vector<double> degree_histogram(const DenseMatrix& a) {
  check_binary_adjacency(a);
  int n = a.rows();
  std::vector<double> hist(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) deg += a(i, j) != 0.0 ? 1 : 0;
    hist[deg] += 1.0;
  }
  for (double& h : hist) h /= n;
  return hist;
}

inline constexpr int kClusteringBins = 100;

// Per-node clustering coefficients binned into 100 uniform bins on [0,1];
// nodes of degree < 2 count as coefficient 0.
inline std::vector<double> clustering_histogram(const DenseMatrix& a) {
  check_binary_adjacency(a);
  int n = a.rows();
  std::vector<double> hist(kClusteringBins, 0.0);
  for (int v = 0; v < n; ++v) {
    std::vector<int> nbrs;
    for (int u = 0; u < n; ++u)
      if (a(v, u) != 0.0) nbrs.push_back(u);
    double c = 0.0;
    if (nbrs.size() >= 2) {
      long long closed = 0;
      for (size_t i = 0; i < nbrs.size(); ++i)
        for (size_t j = i + 1; j < nbrs.size(); ++j)
          if (a(nbrs[i], nbrs[j]) != 0.0) ++closed;
      c = 2.0 * closed / (static_cast<double>(nbrs.size()) * (nbrs.size() - 1));
    }
    int bin = std::min(kClusteringBins - 1, static_cast<int>(c * kClusteringBins));
    hist[bin] += 1.0;
  }
  for (double& h : hist) h /= n;
  return hist;
}

// ---- graphlet orbits -------------------------------------------------------
// Per-node participation counts in the 15 automorphism orbits of the
// connected graphlets on 2-4 nodes. Counted with the combinatorial
// relations of Hocevar & Demsar's ORCA method: local neighborhood scans
// produce mixed sums that a small linear system separates into orbits.
// Exact for any simple undirected graph; fast even on dense predictions.

namespace detail {

struct OrbitScratch {
  int n = 0;
  std::vector<std::vector<int>> adj;          // sorted neighbor lists
  std::vector<std::vector<int>> edge_id;      // parallel to adj
  std::vector<uint64_t> bits;                 // n x ceil(n/64) adjacency bitmap
  int words = 0;
  std::vector<long long> edge_tri;            // common neighbors per edge
  bool connected(int u, int v) const {
    return (bits[static_cast<size_t>(u) * words + (v >> 6)] >> (v & 63)) & 1ULL;
  }
};

inline OrbitScratch build_orbit_scratch(const DenseMatrix& a) {
  OrbitScratch s;
  s.n = a.rows();
  s.words = (s.n + 63) / 64;
  s.adj.resize(s.n);
  s.edge_id.resize(s.n);
  s.bits.assign(static_cast<size_t>(s.n) * s.words, 0);
  int next_edge = 0;
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      if (a(i, j) == 0.0) continue;
      s.adj[i].push_back(j);
      s.bits[static_cast<size_t>(i) * s.words + (j >> 6)] |= 1ULL << (j & 63);
      if (j > i) ++next_edge;
    }
  }
  // assign edge ids on sorted lists (both directions share one id)
  std::vector<std::vector<int>> pending(s.n);
  int id = 0;
  for (int i = 0; i < s.n; ++i) {
    s.edge_id[i].resize(s.adj[i].size());
    for (size_t t = 0; t < s.adj[i].size(); ++t) {
      int j = s.adj[i][t];
      if (j > i) {
        s.edge_id[i][t] = id++;
      } else {
        // find i in adj[j] (sorted) to recover the id assigned earlier
        const auto& aj = s.adj[j];
        size_t lo = std::lower_bound(aj.begin(), aj.end(), i) - aj.begin();
        s.edge_id[i][t] = s.edge_id[j][lo];
      }
    }
  }
  s.edge_tri.assign(id, 0);
  for (int i = 0; i < s.n; ++i) {
    for (size_t t = 0; t < s.adj[i].size(); ++t) {
      int j = s.adj[i][t];
      if (j < i) continue;
      // sorted-list intersection
      long long common = 0;
      size_t x = 0, y = 0;
      const auto& ai = s.adj[i];
      const auto& aj = s.adj[j];
      while (x < ai.size() && y < aj.size()) {
        if (ai[x] == aj[y]) {
          ++common;
          ++x;
          ++y;
        } else if (ai[x] < aj[y]) {
          ++x;
        } else {
          ++y;
        }
      }
      s.edge_tri[s.edge_id[i][t]] = common;
    }
  }
  return s;
}

}  // namespace detail

inline std::vector<std::array<long long, 15>> orbit_counts(const DenseMatrix& a) {
  check_binary_adjacency(a);
  detail::OrbitScratch s = detail::build_orbit_scratch(a);
  int n = s.n;
  std::vector<std::array<long long, 15>> orb(n);
  for (auto& o : orb) o.fill(0);

  // K4 count per node: for each edge (x,y), adjacent pairs among their common
  // neighbors below min(x,y) give each 4-clique exactly once.
  std::vector<long long> k4(n, 0);
  std::vector<int> neigh;
  for (int x = 0; x < n; ++x) {
    for (size_t tx = 0; tx < s.adj[x].size(); ++tx) {
      int y = s.adj[x][tx];
      if (y >= x) break;
      neigh.clear();
      for (int z : s.adj[y]) {
        if (z >= y) break;
        if (s.connected(x, z)) neigh.push_back(z);
      }
      for (size_t i = 0; i < neigh.size(); ++i)
        for (size_t j = i + 1; j < neigh.size(); ++j)
          if (s.connected(neigh[i], neigh[j])) {
            ++k4[x];
            ++k4[y];
            ++k4[neigh[i]];
            ++k4[neigh[j]];
          }
    }
  }

  std::vector<long long> common(n, 0);
  std::vector<int> touched;
  auto deg = [&](int v) { return static_cast<long long>(s.adj[v].size()); };

  for (int x = 0; x < n; ++x) {
    long long f_12_14 = 0, f_10_13 = 0, f_13_14 = 0, f_11_13 = 0;
    long long f_7_11 = 0, f_5_8 = 0, f_6_9 = 0, f_9_12 = 0, f_4_8 = 0, f_8_12 = 0;

    for (int t : touched) common[t] = 0;
    touched.clear();

    orb[x][0] = deg(x);

    // x as middle node
    for (size_t tx = 0; tx < s.adj[x].size(); ++tx) {
      int y = s.adj[x][tx];
      int ey = s.edge_id[x][tx];
      for (size_t ty = 0; ty < s.adj[y].size(); ++ty) {
        int z = s.adj[y][ty];
        int ez = s.edge_id[y][ty];
        if (s.connected(x, z)) {
          if (z < y) {
            f_12_14 += s.edge_tri[ez] - 1;
            f_10_13 += (deg(y) - 1 - s.edge_tri[ez]) + (deg(z) - 1 - s.edge_tri[ez]);
          }
        } else if (z != x) {
          if (common[z] == 0) touched.push_back(z);
          ++common[z];
        }
      }
      for (size_t tx2 = tx + 1; tx2 < s.adj[x].size(); ++tx2) {
        int z = s.adj[x][tx2];
        int ez = s.edge_id[x][tx2];
        if (s.connected(y, z)) {
          ++orb[x][3];
          f_13_14 += (s.edge_tri[ey] - 1) + (s.edge_tri[ez] - 1);
          f_11_13 += (deg(x) - 1 - s.edge_tri[ey]) + (deg(x) - 1 - s.edge_tri[ez]);
        } else {
          ++orb[x][2];
          f_7_11 += (deg(x) - 1 - s.edge_tri[ey] - 1) + (deg(x) - 1 - s.edge_tri[ez] - 1);
          f_5_8 += (deg(y) - 1 - s.edge_tri[ey]) + (deg(z) - 1 - s.edge_tri[ez]);
        }
      }
    }

    // x as side node
    for (size_t tx = 0; tx < s.adj[x].size(); ++tx) {
      int y = s.adj[x][tx];
      int ey = s.edge_id[x][tx];
      for (size_t ty = 0; ty < s.adj[y].size(); ++ty) {
        int z = s.adj[y][ty];
        int ez = s.edge_id[y][ty];
        if (z == x || s.connected(x, z)) continue;
        ++orb[x][1];
        f_6_9 += deg(y) - 1 - s.edge_tri[ey] - 1;
        f_9_12 += s.edge_tri[ez];
        f_4_8 += deg(z) - 1 - s.edge_tri[ez];
        f_8_12 += common[z] - 1;
      }
    }

    orb[x][14] = k4[x];
    orb[x][13] = (f_13_14 - 6 * orb[x][14]) / 2;
    orb[x][12] = f_12_14 - 3 * orb[x][14];
    orb[x][11] = (f_11_13 - f_13_14 + 6 * orb[x][14]) / 2;
    orb[x][10] = f_10_13 - f_13_14 + 6 * orb[x][14];
    orb[x][9] = (f_9_12 - 2 * f_12_14 + 6 * orb[x][14]) / 2;
    orb[x][8] = (f_8_12 - 2 * f_12_14 + 6 * orb[x][14]) / 2;
    orb[x][7] = (f_13_14 + f_7_11 - f_11_13 - 6 * orb[x][14]) / 6;
    orb[x][6] = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * orb[x][14]) / 2;
    orb[x][5] = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * orb[x][14];
    orb[x][4] = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * orb[x][14];
  }
  return orb;
}

// Per-graph orbit descriptor: mean of the per-node 15-vectors.
inline std::array<double, 15> orbit_mean_vector(const DenseMatrix& a) {
  auto per_node = orbit_counts(a);
  std::array<double, 15> mean{};
  for (const auto& o : per_node)
    for (int i = 0; i < 15; ++i) mean[i] += static_cast<double>(o[i]);
  for (double& v : mean) v /= static_cast<double>(per_node.size());
  return mean;
}

struct GraphStats {
  std::vector<double> degree_hist;
  std::vector<double> clustering_hist;
  std::array<double, 15> orbit_mean{};
};

inline GraphStats graph_stats(const DenseMatrix& a) {
  return {degree_histogram(a), clustering_histogram(a), orbit_mean_vector(a)};
}

// First Wasserstein distance between 1-D histograms on a shared ordered
// support with unit bin width: sum of |CDF differences|. A shorter input is
// zero-padded to the longer support.
inline double emd_1d(const std::vector<double>& p, const std::vector<double>& q) {
  size_t len = std::max(p.size(), q.size());
  double cdf_p = 0.0, cdf_q = 0.0, dist = 0.0;
  for (size_t i = 0; i < len; ++i) {
    cdf_p += i < p.size() ? p[i] : 0.0;
    cdf_q += i < q.size() ? q[i] : 0.0;
    dist += std::abs(cdf_p - cdf_q);
  }
  return dist;
}

// Squared-MMD biased estimator with Gaussian kernel exp(-d^2 / (2 sigma^2)).
template <class Desc, class Dist>
double mmd_biased(const std::vector<Desc>& xs, const std::vector<Desc>& ys, Dist&& dist,
                  double sigma) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("mmd: empty descriptor set");
  double inv = 1.0 / (2.0 * sigma * sigma);
  auto kernel_mean = [&](const std::vector<Desc>& a, const std::vector<Desc>& b) {
    double total = 0.0;
    for (const Desc& x : a)
      for (const Desc& y : b) {
        double d = dist(x, y);
        total += std::exp(-d * d * inv);
      }
    return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  };
  return kernel_mean(xs, xs) + kernel_mean(ys, ys) - 2.0 * kernel_mean(xs, ys);
}

inline double euclidean(const std::array<double, 15>& a, const std::array<double, 15>& b) {
  double d2 = 0.0;
  for (int i = 0; i < 15; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d2);
}

struct MmdReport {
  double degree_mmd = 0.0;
  double clustering_mmd = 0.0;
  double orbit_mmd = 0.0;
  size_t size_a = 0;
  size_t size_b = 0;
  double sigma = 1.0;
};

// MMD^2 between two sets of binary graphs over the three statistics. EMD is
// the ground distance for the histograms, Euclidean for orbit mean-vectors.
inline MmdReport mmd_report(const std::vector<DenseMatrix>& truth,
                            const std::vector<DenseMatrix>& predicted, double sigma = 1.0) {
  MmdReport rep;
  rep.size_a = truth.size();
  rep.size_b = predicted.size();
  rep.sigma = sigma;
  std::vector<std::vector<double>> deg_a, deg_b, clus_a, clus_b;
  std::vector<std::array<double, 15>> orb_a, orb_b;
  for (const DenseMatrix& g : truth) {
    deg_a.push_back(degree_histogram(g));
    clus_a.push_back(clustering_histogram(g));
    orb_a.push_back(orbit_mean_vector(g));
  }
  for (const DenseMatrix& g : predicted) {
    deg_b.push_back(degree_histogram(g));
    clus_b.push_back(clustering_histogram(g));
    orb_b.push_back(orbit_mean_vector(g));
  }
  auto emd = [](const std::vector<double>& a, const std::vector<double>& b) {
    return emd_1d(a, b);
  };
  rep.degree_mmd = mmd_biased(deg_a, deg_b, emd, sigma);
  rep.clustering_mmd = mmd_biased(clus_a, clus_b, emd, sigma);
  rep.orbit_mmd = mmd_biased(orb_a, orb_b, euclidean, sigma);
  return rep;
}

// ---- edge classification ----------------------------------------------------

struct EdgeClassReport {
  double accuracy = 0.0;
  double iou = 0.0;
  double dice = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  long long tp = 0, fp = 0, fn = 0, tn = 0;
};

namespace detail {
inline EdgeClassReport report_from_counts(long long tp, long long fp, long long fn,
                                          long long tn) {
  EdgeClassReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tn = tn;
  long long total = tp + fp + fn + tn;
  bool both_empty = tp + fp + fn == 0;
  r.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 1.0;
  r.iou = both_empty ? 1.0 : static_cast<double>(tp) / (tp + fp + fn);
  r.dice = both_empty ? 1.0 : 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : (both_empty ? 1.0 : 0.0);
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : (both_empty ? 1.0 : 0.0);
  return r;
}
}  // namespace detail

// Confusion counts over the strictly-upper-triangular node pairs. When both
// graphs are empty the overlap metrics are 1 by convention.
inline EdgeClassReport edge_class_metrics(const DenseMatrix& predicted,
                                          const DenseMatrix& truth) {
  check_same_shape("edge_class_metrics", predicted, truth);
  check_binary_adjacency(predicted);
  check_binary_adjacency(truth);
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (int i = 0; i < truth.rows(); ++i) {
    for (int j = i + 1; j < truth.cols(); ++j) {
      bool p = predicted(i, j) != 0.0;
      bool t = truth(i, j) != 0.0;
      if (p && t) ++tp;
      else if (p && !t) ++fp;
      else if (!p && t) ++fn;
      else ++tn;
    }
  }
  return detail::report_from_counts(tp, fp, fn, tn);
}

// Micro-average: pool the confusion counts across samples.
inline EdgeClassReport aggregate_edge_class(const std::vector<EdgeClassReport>& reports) {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (const EdgeClassReport& r : reports) {
    tp += r.tp;
    fp += r.fp;
    fn += r.fn;
    tn += r.tn;
  }
  return detail::report_from_counts(tp, fp, fn, tn);
}

}  // namespace gln
