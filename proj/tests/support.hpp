#pragma once

// Shared fixtures, deterministic randomness, and reference computations for
// the test binaries.  Everything here is intentionally independent of the
// library internals it exercises: path counts come from brute enumeration,
// y vectors from truncated series, graphs from a direct matrix encoding.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmsgraph/graph.hpp"
#include "kmsgraph/kms.hpp"
#include "kmsgraph/spectral.hpp"

#ifndef KMSGRAPH_DATA_DIR
#error "tests must be compiled with KMSGRAPH_DATA_DIR"
#endif

namespace kmstest {

inline std::string data_path(const std::string& name) {
  return std::string(KMSGRAPH_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline kmsgraph::DirectedGraph load_fixture(const std::string& name) {
  return kmsgraph::DirectedGraph::parse(read_file(data_path(name)));
}

/// A corpus graph together with a temperature at which the truncated
/// representation reaches tail mass < 1e-8 within the default basis cap.
struct CorpusEntry {
  std::string file;
  double q;
};

inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"single_loop.json", 0.5},      {"two_loops.json", 0.1},
      {"three_loops.json", 0.03},     {"five_loops.json", 0.008},
      {"single_edge.json", 0.5},      {"two_loops_source.json", 0.1},
      {"cycle2.json", 0.5},           {"cycle3.json", 0.5},
      {"chain3.json", 0.5},           {"vertex_only.json", 0.5},
      {"two_isolated.json", 0.5},     {"loop_and_source.json", 0.45},
      {"diamond.json", 0.6},
  };
  return entries;
}

/// Corpus members that are strongly connected (used by the critical-state
/// criteria, where q = 1/rho).
inline const std::vector<std::string>& strongly_connected_corpus() {
  static const std::vector<std::string> names = {
      "single_loop.json", "two_loops.json", "three_loops.json",
      "five_loops.json",  "cycle2.json",    "cycle3.json",
  };
  return names;
}

/// splitmix64; deterministic across platforms, good enough spreading for
/// test-case generation.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }
  /// Uniform in {0, ..., n-1}.
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

/// Graph whose vertex matrix is the given a, i.e. a[v][w] parallel edges
/// from w into v.  Vertices are named v0, v1, ...; edge ids are e0, e1, ...
/// in row-major matrix order, so parallel edges are consecutive.
inline kmsgraph::DirectedGraph graph_from_matrix(const std::vector<std::vector<long long>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::string> vertices;
  for (int v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<kmsgraph::DirectedGraph::EdgeDecl> edges;
  int id = 0;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      for (long long k = 0; k < a[v][w]; ++k)
        edges.push_back({"e" + std::to_string(id++), vertices[v], vertices[w]});
  return kmsgraph::DirectedGraph(std::move(vertices), std::move(edges));
}

/// Uniformly random graph with 1..max_vertices vertices and 0..max_edges
/// edges with independent uniform endpoints.
inline kmsgraph::DirectedGraph random_graph(SplitMix64& rng, int max_vertices, int max_edges) {
  const int n = 1 + rng.below(max_vertices);
  const int k = rng.below(max_edges + 1);
  std::vector<std::string> vertices;
  for (int v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
  std::vector<kmsgraph::DirectedGraph::EdgeDecl> edges;
  for (int e = 0; e < k; ++e)
    edges.push_back({"e" + std::to_string(e), vertices[rng.below(n)], vertices[rng.below(n)]});
  return kmsgraph::DirectedGraph(std::move(vertices), std::move(edges));
}

/// A random temperature with q rho comfortably below one, so resolvent
/// solves stay well conditioned.
inline double random_admissible_q(const kmsgraph::DirectedGraph& g, SplitMix64& rng) {
  const double rho = kmsgraph::spectral_radius(kmsgraph::vertex_matrix(g)).rho;
  const double u = rng.uniform(0.05, 0.7);
  return rho > 0.0 ? u / rho : u;
}

/// A random point of the simplex { eps >= 0 : eps . y = 1 } with full
/// support.
inline std::vector<double> random_simplex_point(const kmsgraph::DirectedGraph& g, double q,
                                                SplitMix64& rng) {
  const std::vector<double> y = kmsgraph::y_vector(g, q);
  std::vector<double> eps(y.size());
  double dot = 0.0;
  for (std::size_t v = 0; v < eps.size(); ++v) {
    eps[v] = rng.uniform(0.05, 1.0);
    dot += eps[v] * y[v];
  }
  for (double& x : eps) x /= dot;
  return eps;
}

/// Number of paths of the given length by brute depth-first enumeration,
/// independent of the matrix-power identity it cross-checks.
inline long long brute_path_count(const kmsgraph::DirectedGraph& g, int length) {
  if (length == 0) return g.vertex_count();
  long long total = 0;
  // walk backwards: a path of length L+1 extends a path of length L at its
  // source vertex
  struct Frame {
    int vertex;
    int remaining;
  };
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<Frame> stack = {{v, length}};
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.remaining == 0) {
        ++total;
        continue;
      }
      for (int e : g.edges_into(f.vertex)) stack.push_back({g.edge(e).source, f.remaining - 1});
    }
    // the stack seeded at v counted paths with range v
  }
  return total;
}

/// y_v = sum over paths with source v of q^{|path|}, truncated at length L.
/// Underestimates the true y; the tail is bounded by the final term times
/// the geometric factor, which the caller controls via L.
inline std::vector<double> series_y(const kmsgraph::DirectedGraph& g, double q, int L) {
  const int n = g.vertex_count();
  std::vector<double> y(n, 0.0);
  // level[v] = sum over paths of the current length with source v of q^len
  std::vector<double> level(n, 1.0);
  for (int len = 0; len <= L; ++len) {
    for (int v = 0; v < n; ++v) y[v] += level[v];
    std::vector<double> next(n, 0.0);
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto& edge = g.edge(e);
      // an edge into r extends every path with source r to one with the
      // edge's source
      next[edge.source] += q * level[edge.range];
    }
    level = std::move(next);
  }
  return y;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

}  // namespace kmstest
