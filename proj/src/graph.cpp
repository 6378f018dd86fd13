#include "kmsgraph/graph.hpp"

#include <algorithm>
#include <json.hpp>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices, std::vector<EdgeDecl> edges)
    : names_(std::move(vertices)) {
  if (names_.empty()) throw ParseError("graph needs at least one vertex");
  for (int v = 0; v < vertex_count(); ++v) {
    if (names_[v].empty()) throw ParseError("vertex names must be nonempty");
    if (!vertex_lookup_.emplace(names_[v], v).second)
      throw ParseError("duplicate vertex id \"" + names_[v] + "\"");
  }
  into_.resize(names_.size());
  outof_.resize(names_.size());
  edges_.reserve(edges.size());
  for (auto& decl : edges) {
    if (decl.id.empty()) throw ParseError("edge ids must be nonempty");
    const int e = static_cast<int>(edges_.size());
    if (!edge_lookup_.emplace(decl.id, e).second)
      throw ParseError("duplicate edge id \"" + decl.id + "\"");
    const auto r = vertex_lookup_.find(decl.range);
    if (r == vertex_lookup_.end())
      throw ParseError("edge \"" + decl.id + "\" has dangling range \"" + decl.range + "\"");
    const auto s = vertex_lookup_.find(decl.source);
    if (s == vertex_lookup_.end())
      throw ParseError("edge \"" + decl.id + "\" has dangling source \"" + decl.source + "\"");
    edges_.push_back(Edge{std::move(decl.id), r->second, s->second});
    into_[r->second].push_back(e);
    outof_[s->second].push_back(e);
  }
}

DirectedGraph DirectedGraph::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "vertices" && key != "edges")
      throw ParseError("unknown key \"" + key + "\" in graph document");
  }
  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    throw ParseError("graph document needs a \"vertices\" array");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ParseError("graph document needs an \"edges\" array");

  std::vector<std::string> vertices;
  for (const auto& item : doc["vertices"]) {
    if (!item.is_string()) throw ParseError("vertex entries must be strings");
    vertices.push_back(item.get<std::string>());
  }
  std::vector<EdgeDecl> edges;
  for (const auto& item : doc["edges"]) {
    if (!item.is_object()) throw ParseError("edge entries must be objects");
    EdgeDecl decl;
    for (const auto& [key, value] : item.items()) {
      if (!value.is_string()) throw ParseError("edge fields must be strings");
      if (key == "id")
        decl.id = value.get<std::string>();
      else if (key == "range")
        decl.range = value.get<std::string>();
      else if (key == "source")
        decl.source = value.get<std::string>();
      else
        throw ParseError("unknown key \"" + key + "\" in edge entry");
    }
    if (decl.id.empty() || decl.range.empty() || decl.source.empty())
      throw ParseError("edge entries need \"id\", \"range\" and \"source\"");
    edges.push_back(std::move(decl));
  }
  return DirectedGraph(std::move(vertices), std::move(edges));
}

int DirectedGraph::vertex_index(std::string_view name) const {
  const auto it = vertex_lookup_.find(name);
  if (it == vertex_lookup_.end()) throw Error("unknown vertex \"" + std::string(name) + "\"");
  return it->second;
}

int DirectedGraph::edge_index(std::string_view id) const {
  const auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) throw Error("unknown edge \"" + std::string(id) + "\"");
  return it->second;
}

Path Path::at_vertex(int v) {
  Path p;
  p.range_ = v;
  p.source_ = v;
  return p;
}

Path::Path(const DirectedGraph& g, std::vector<int32_t> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw Error("edge paths need at least one edge; use at_vertex");
  for (size_t i = 0; i + 1 < edges_.size(); ++i)
    if (g.edge(edges_[i]).source != g.edge(edges_[i + 1]).range)
      throw Error("path edges do not compose at position " + std::to_string(i));
  range_ = g.edge(edges_.front()).range;
  source_ = g.edge(edges_.back()).source;
}

std::string Path::label(const DirectedGraph& g) const {
  if (is_vertex()) return g.vertex_name(range_);
  std::string out;
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (i) out += '.';
    out += g.edge(edges_[i]).id;
  }
  return out;
}

Path concat(const Path& mu, const Path& nu) {
  if (mu.source_ != nu.range_) throw Error("paths do not compose");
  if (mu.is_vertex()) return nu;
  if (nu.is_vertex()) return mu;
  Path out;
  out.edges_.reserve(mu.edges_.size() + nu.edges_.size());
  out.edges_.insert(out.edges_.end(), mu.edges_.begin(), mu.edges_.end());
  out.edges_.insert(out.edges_.end(), nu.edges_.begin(), nu.edges_.end());
  out.range_ = mu.range_;
  out.source_ = nu.source_;
  return out;
}

std::optional<Path> factorize_path(const Path& lambda, const Path& mu) {
  if (mu.length() > lambda.length()) return std::nullopt;
  if (mu.is_vertex()) return mu.range_ == lambda.range_ ? std::optional<Path>(lambda) : std::nullopt;
  for (int i = 0; i < mu.length(); ++i)
    if (lambda.edges_[i] != mu.edges_[i]) return std::nullopt;
  Path rest;
  rest.edges_.assign(lambda.edges_.begin() + mu.length(), lambda.edges_.end());
  rest.range_ = mu.source_;
  rest.source_ = lambda.source_;
  return rest;
}

IntMatrix vertex_matrix(const DirectedGraph& g) {
  IntMatrix a(g.vertex_count(), g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) a(g.edge(e).range, g.edge(e).source) += 1;
  return a;
}

std::vector<int> source_vertices(const DirectedGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.edges_into(v).empty()) out.push_back(v);
  return out;
}

std::vector<int> sink_vertices(const DirectedGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.edges_out_of(v).empty()) out.push_back(v);
  return out;
}

namespace {

void extend_paths(const DirectedGraph& g, std::vector<int32_t>& prefix, int remaining,
                  std::optional<int> source, std::vector<Path>& out) {
  if (remaining == 0) {
    Path p(g, prefix);
    if (!source || p.source() == *source) out.push_back(std::move(p));
    return;
  }
  // The next edge must have its range at the source of the previous edge.
  const int at = g.edge(prefix.back()).source;
  for (int e : g.edges_into(at)) {
    prefix.push_back(e);
    extend_paths(g, prefix, remaining - 1, source, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const DirectedGraph& g, int length, std::optional<int> source) {
  if (length < 0) throw Error("path length must be nonnegative");
  std::vector<Path> out;
  if (length == 0) {
    for (int v = 0; v < g.vertex_count(); ++v)
      if (!source || v == *source) out.push_back(Path::at_vertex(v));
    return out;
  }
  std::vector<int32_t> prefix;
  for (int e = 0; e < g.edge_count(); ++e) {
    prefix.push_back(e);
    extend_paths(g, prefix, length - 1, source, out);
    prefix.pop_back();
  }
  return out;
}

long long count_paths(const DirectedGraph& g, int length) {
  if (length == 0) return g.vertex_count();
  IntMatrix power = IntMatrix::identity(g.vertex_count());
  const IntMatrix a = vertex_matrix(g);
  for (int i = 0; i < length; ++i) power = power * a;
  long long total = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int w = 0; w < g.vertex_count(); ++w) {
      total += power(v, w);
      if (total >= IntMatrix::kSaturation) return IntMatrix::kSaturation;
    }
  return total;
}

namespace detail {

std::vector<std::vector<int>> tarjan_scc(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> components;
  int counter = 0;

  // Iterative Tarjan; frames carry the next neighbour offset.
  struct Frame {
    int v;
    size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adjacency[f.v].size()) {
        const int w = adjacency[f.v][f.next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          components.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

}  // namespace detail

namespace {

std::vector<std::vector<int>> adjacency_of(const DirectedGraph& g) {
  // Walk direction source -> range; reachability along it matches path
  // existence from source to range.
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) adj[g.edge(e).source].push_back(g.edge(e).range);
  return adj;
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const DirectedGraph& g) {
  return detail::tarjan_scc(adjacency_of(g));
}

bool strongly_connected(const DirectedGraph& g) {
  if (g.vertex_count() == 1) return !g.edges_into(0).empty();
  return strongly_connected_components(g).size() == 1;
}

SaturationChain source_saturation(const DirectedGraph& g) {
  SaturationChain chain;
  std::vector<char> in_set(g.vertex_count(), 0);
  std::vector<int> current = source_vertices(g);
  for (int v : current) in_set[v] = 1;
  chain.levels.push_back(current);
  while (true) {
    std::vector<int> next = current;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (in_set[v]) continue;
      bool all_inside = true;
      for (int e : g.edges_into(v))
        if (!in_set[g.edge(e).source]) {
          all_inside = false;
          break;
        }
      if (all_inside) next.push_back(v);
    }
    if (next.size() == current.size()) break;
    std::sort(next.begin(), next.end());
    for (int v : next) in_set[v] = 1;
    chain.levels.push_back(next);
    current = std::move(next);
  }
  return chain;
}

BlockDecomposition block_decomposition(const DirectedGraph& g, const SaturationChain& chain) {
  const int n = g.vertex_count();
  std::vector<int> level(n, -1);  // saturation level, -1 outside the closure
  for (size_t k = 0; k < chain.levels.size(); ++k)
    for (int v : chain.levels[k])
      if (level[v] == -1) level[v] = static_cast<int>(k);

  BlockDecomposition out;
  for (int v = 0; v < n; ++v)
    if (level[v] == -1) out.order.push_back(v);
  out.core_dim = static_cast<int>(out.order.size());
  for (int k = static_cast<int>(chain.levels.size()) - 1; k >= 0; --k)
    for (int v = 0; v < n; ++v)
      if (level[v] == k) out.order.push_back(v);

  const IntMatrix a = vertex_matrix(g);
  const int h_dim = n - out.core_dim;
  out.core = IntMatrix(out.core_dim, out.core_dim);
  out.coupling = IntMatrix(out.core_dim, h_dim);
  out.saturated = IntMatrix(h_dim, h_dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const long long value = a(out.order[i], out.order[j]);
      if (value == 0) continue;
      if (i < out.core_dim && j < out.core_dim)
        out.core(i, j) = value;
      else if (i < out.core_dim)
        out.coupling(i, j - out.core_dim) = value;
      else if (j < out.core_dim)
        throw InternalError("saturation closure is not hereditary");
      else
        out.saturated(i - out.core_dim, j - out.core_dim) = value;
    }
  for (int i = 0; i < h_dim; ++i)
    for (int j = 0; j <= i; ++j)
      if (out.saturated(i, j) != 0)
        throw InternalError("saturated block is not strictly upper triangular");
  return out;
}

InducedSubgraph subgraph_excluding(const DirectedGraph& g, std::span<const int> removed) {
  std::vector<char> gone(g.vertex_count(), 0);
  for (int v : removed) gone[v] = 1;
  std::vector<std::string> names;
  std::vector<int> to_parent;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!gone[v]) {
      names.push_back(g.vertex_name(v));
      to_parent.push_back(v);
    }
  std::vector<DirectedGraph::EdgeDecl> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (gone[edge.source]) continue;
    if (gone[edge.range])
      throw Error("removed set is not hereditary: edge \"" + edge.id + "\" dangles");
    edges.push_back({edge.id, g.vertex_name(edge.range), g.vertex_name(edge.source)});
  }
  return InducedSubgraph{DirectedGraph(std::move(names), std::move(edges)), std::move(to_parent)};
}

}  // namespace kmsgraph
