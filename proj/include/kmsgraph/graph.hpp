#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kmsgraph/linalg.hpp"

namespace kmsgraph {

/// Directed edge in the receiver convention: the edge leaves its source
/// vertex s(e) and points into its range vertex r(e).  A path
/// mu_1 mu_2 ... mu_n requires s(mu_i) = r(mu_{i+1}), so paths run from
/// the source of the last edge to the range of the first.
struct Edge {
  std::string id;
  int range = -1;
  int source = -1;
};

/// Finite directed graph with string-labelled vertices and edges.  Loops
/// and parallel edges are allowed.  The canonical vertex order is the
/// declaration order; every vector or matrix indexed by vertices uses it,
/// as does every edge list.
class DirectedGraph {
 public:
  struct EdgeDecl {
    std::string id, range, source;
  };

  DirectedGraph(std::vector<std::string> vertices, std::vector<EdgeDecl> edges);

  /// Reads {"vertices": ["v", ...], "edges": [{"id", "range", "source"}, ...]}.
  /// Unknown keys are rejected.  Throws ParseError.
  static DirectedGraph parse(std::string_view json_text);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_name(int v) const { return names_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Index of a named vertex or edge; throws Error when unknown.
  int vertex_index(std::string_view name) const;
  int edge_index(std::string_view id) const;

  /// Edges received by v, i.e. { e : r(e) = v }, in declaration order.
  std::span<const int> edges_into(int v) const { return into_[v]; }
  /// Edges emitted by v, i.e. { e : s(e) = v }, in declaration order.
  std::span<const int> edges_out_of(int v) const { return outof_[v]; }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> into_, outof_;
  std::map<std::string, int, std::less<>> vertex_lookup_, edge_lookup_;
};

/// Finite path.  Length zero paths sit at a single vertex.  Edges are kept
/// in path order, so edges()[0] is the edge whose range is the range of the
/// whole path.
class Path {
 public:
  static Path at_vertex(int v);
  /// Validates consecutive composability; throws Error.
  Path(const DirectedGraph& g, std::vector<int32_t> edges);

  int length() const { return static_cast<int>(edges_.size()); }
  bool is_vertex() const { return edges_.empty(); }
  int range() const { return range_; }
  int source() const { return source_; }
  std::span<const int32_t> edges() const { return edges_; }
  std::string label(const DirectedGraph& g) const;

  bool operator==(const Path&) const = default;

  friend Path concat(const Path& mu, const Path& nu);
  friend std::optional<Path> factorize_path(const Path& lambda, const Path& mu);

 private:
  Path() = default;
  std::vector<int32_t> edges_;
  int32_t range_ = -1;
  int32_t source_ = -1;
};

/// mu nu, defined when s(mu) = r(nu); throws Error otherwise.
Path concat(const Path& mu, const Path& nu);

/// The unique lambda' with lambda = mu lambda', when mu is an initial
/// segment of lambda; nullopt otherwise.
std::optional<Path> factorize_path(const Path& lambda, const Path& mu);

/// Vertex matrix A(v, w) = #{ e : r(e) = v, s(e) = w }.  Powers count
/// paths: A^n(v, w) = #{ mu : |mu| = n, r(mu) = v, s(mu) = w }.
IntMatrix vertex_matrix(const DirectedGraph& g);

/// Vertices that receive no edges.
std::vector<int> source_vertices(const DirectedGraph& g);
/// Vertices that emit no edges.
std::vector<int> sink_vertices(const DirectedGraph& g);

/// All paths of the given length, ordered lexicographically by edge index
/// sequence (level zero: one path per vertex in canonical order).  The
/// optional filter keeps paths with the given source vertex.
std::vector<Path> enumerate_paths(const DirectedGraph& g, int length,
                                  std::optional<int> source = std::nullopt);

/// Number of paths of the given length, saturating.
long long count_paths(const DirectedGraph& g, int length);

/// Strong connectivity in the irreducibility sense: a path of length >= 1
/// between every ordered pair of vertices.  A single vertex without a loop
/// is not strongly connected.
bool strongly_connected(const DirectedGraph& g);

/// Strongly connected components, each sorted, listed by smallest member.
std::vector<std::vector<int>> strongly_connected_components(const DirectedGraph& g);

namespace detail {
/// Tarjan over an adjacency-list relation; components sorted by smallest
/// member, members ascending.
std::vector<std::vector<int>> tarjan_scc(const std::vector<std::vector<int>>& adjacency);
}  // namespace detail

/// Increasing chain S_0 subset ... subset S_n produced by saturating the
/// source vertices: S_{k+1} adds every vertex all of whose feeding sources
/// s(vE^1) already lie in S_k.  The chain stops at the first repeat.
struct SaturationChain {
  std::vector<std::vector<int>> levels;
  const std::vector<int>& closure() const { return levels.back(); }
};

SaturationChain source_saturation(const DirectedGraph& g);

/// Vertex matrix permuted to the order (complement of the closure, then the
/// closure by descending saturation level).  The closure is hereditary, so
/// the lower left block vanishes and the closure block is strictly upper
/// triangular.
struct BlockDecomposition {
  std::vector<int> order;
  int core_dim = 0;
  IntMatrix core;       // rows and columns outside the closure
  IntMatrix coupling;   // rows outside, columns inside
  IntMatrix saturated;  // rows and columns inside the closure
};

BlockDecomposition block_decomposition(const DirectedGraph& g, const SaturationChain& chain);

/// The graph on the complement of a hereditary vertex set: vertices outside
/// the set (original relative order) and edges whose source lies outside.
/// Throws Error when an edge would dangle, i.e. the set is not hereditary.
struct InducedSubgraph {
  DirectedGraph graph;
  std::vector<int> to_parent;
};

InducedSubgraph subgraph_excluding(const DirectedGraph& g, std::span<const int> removed);

}  // namespace kmsgraph
