#include <algorithm>
#include <vector>

#include "doctest.h"
#include "kmsgraph/errors.hpp"
#include "kmsgraph/graph.hpp"
#include "support.hpp"

using namespace kmsgraph;

TEST_CASE("parse keeps declaration order and endpoint indices") {
  const DirectedGraph g = kmstest::load_fixture("two_loops_source.json");
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 3);
  CHECK(g.vertex_name(0) == "v");
  CHECK(g.vertex_name(1) == "w");
  CHECK(g.vertex_index("w") == 1);
  CHECK(g.edge(2).id == "c");
  CHECK(g.edge(2).range == 0);
  CHECK(g.edge(2).source == 1);
  CHECK(g.edge_index("b") == 1);

  const IntMatrix a = vertex_matrix(g);
  CHECK(a(0, 0) == 2);
  CHECK(a(0, 1) == 1);
  CHECK(a(1, 0) == 0);
  CHECK(a(1, 1) == 0);

  CHECK(g.edges_into(0).size() == 3);
  CHECK(g.edges_out_of(1).size() == 1);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(DirectedGraph::parse("not json"), ParseError);
  CHECK_THROWS_AS(DirectedGraph::parse(R"({"vertices": []})"), ParseError);
  CHECK_THROWS_AS(DirectedGraph::parse(R"({"vertices": ["v", "v"], "edges": []})"), ParseError);
  CHECK_THROWS_AS(
      DirectedGraph::parse(R"({"vertices": ["v"], "edges": [{"id": "e", "range": "v", "source": "u"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      DirectedGraph::parse(
          R"({"vertices": ["v"], "edges": [{"id": "e", "range": "v", "source": "v"}, {"id": "e", "range": "v", "source": "v"}]})"),
      ParseError);
  CHECK_THROWS_AS(DirectedGraph::parse(R"({"vertices": ["v"], "edges": [], "extra": 1})"),
                  ParseError);
}

TEST_CASE("path composability and factorization") {
  const DirectedGraph g = kmstest::load_fixture("cycle2.json");
  const int e = g.edge_index("e"), f = g.edge_index("f");
  // e leaves v into w, f leaves w into v; ef is a path, ee is not
  const Path ef(g, {e, f});
  CHECK(ef.length() == 2);
  CHECK(ef.range() == g.vertex_index("w"));
  CHECK(ef.source() == g.vertex_index("w"));
  CHECK_THROWS_AS(Path(g, {e, e}), Error);

  const Path just_e(g, {e});
  const Path tail = concat(just_e, Path::at_vertex(just_e.source()));
  CHECK(tail == just_e);
  const auto rest = factorize_path(ef, just_e);
  REQUIRE(rest.has_value());
  CHECK(rest->edges().size() == 1);
  CHECK(rest->edges()[0] == f);
  CHECK_FALSE(factorize_path(just_e, ef).has_value());
}

TEST_CASE("path enumeration matches matrix powers") {
  // counts of length-n paths agree with the entry sums of A^n
  for (const char* name : {"cycle3.json", "two_loops.json", "two_loops_source.json",
                           "diamond.json", "five_loops.json"}) {
    const DirectedGraph g = kmstest::load_fixture(name);
    const IntMatrix a = vertex_matrix(g);
    IntMatrix power = IntMatrix::identity(g.vertex_count());
    for (int n = 0; n <= 6; ++n) {
      long long entry_sum = 0;
      for (int v = 0; v < g.vertex_count(); ++v)
        for (int w = 0; w < g.vertex_count(); ++w) entry_sum += power(v, w);
      CHECK(count_paths(g, n) == entry_sum);
      CHECK(count_paths(g, n) == kmstest::brute_path_count(g, n));
      if (n <= 4) CHECK(static_cast<long long>(enumerate_paths(g, n).size()) == entry_sum);
      power = power * a;
    }
  }
}

TEST_CASE("enumerated paths carry consistent endpoints") {
  const DirectedGraph g = kmstest::load_fixture("two_loops_source.json");
  for (int n = 0; n <= 3; ++n) {
    for (const Path& p : enumerate_paths(g, n)) {
      CHECK(p.length() == n);
      if (n == 0) continue;
      CHECK(p.range() == g.edge(p.edges().front()).range);
      CHECK(p.source() == g.edge(p.edges().back()).source);
      for (int i = 0; i + 1 < n; ++i)
        CHECK(g.edge(p.edges()[i]).source == g.edge(p.edges()[i + 1]).range);
    }
  }
  // the source filter keeps exactly the matching paths
  const auto all = enumerate_paths(g, 2);
  const auto from_w = enumerate_paths(g, 2, g.vertex_index("w"));
  const auto match = static_cast<std::size_t>(
      std::count_if(all.begin(), all.end(),
                    [&](const Path& p) { return p.source() == g.vertex_index("w"); }));
  CHECK(from_w.size() == match);
}

TEST_CASE("strong connectivity follows the irreducibility convention") {
  CHECK_FALSE(strongly_connected(kmstest::load_fixture("vertex_only.json")));
  CHECK(strongly_connected(kmstest::load_fixture("single_loop.json")));
  CHECK(strongly_connected(kmstest::load_fixture("cycle2.json")));
  CHECK(strongly_connected(kmstest::load_fixture("cycle3.json")));
  CHECK_FALSE(strongly_connected(kmstest::load_fixture("two_loops_source.json")));
  CHECK_FALSE(strongly_connected(kmstest::load_fixture("chain3.json")));
}

TEST_CASE("strongly connected components") {
  const DirectedGraph g = kmstest::load_fixture("two_loops_source.json");
  const auto comps = strongly_connected_components(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<int>{0});
  CHECK(comps[1] == std::vector<int>{1});
  CHECK(strongly_connected_components(kmstest::load_fixture("cycle3.json")).size() == 1);
  CHECK(strongly_connected_components(kmstest::load_fixture("diamond.json")).size() == 4);
}

TEST_CASE("sources and sinks") {
  const DirectedGraph g = kmstest::load_fixture("chain3.json");
  CHECK(source_vertices(g) == std::vector<int>{g.vertex_index("w")});
  CHECK(sink_vertices(g) == std::vector<int>{g.vertex_index("v")});
  CHECK(source_vertices(kmstest::load_fixture("cycle2.json")).empty());
  CHECK(source_vertices(kmstest::load_fixture("two_isolated.json")) == std::vector<int>{0, 1});
}

TEST_CASE("source saturation grows level by level") {
  const DirectedGraph g = kmstest::load_fixture("chain3.json");
  const SaturationChain chain = source_saturation(g);
  REQUIRE(chain.levels.size() == 3);
  CHECK(chain.levels[0] == std::vector<int>{g.vertex_index("w")});
  std::vector<int> s1 = {g.vertex_index("u"), g.vertex_index("w")};
  std::sort(s1.begin(), s1.end());
  CHECK(chain.levels[1] == s1);
  CHECK(chain.levels[2] == std::vector<int>{0, 1, 2});

  // a strongly connected graph saturates to nothing
  CHECK(source_saturation(kmstest::load_fixture("cycle3.json")).closure().empty());
}

TEST_CASE("block decomposition splits off the saturated part") {
  const DirectedGraph g = kmstest::load_fixture("two_loops_source.json");
  const BlockDecomposition blocks = block_decomposition(g, source_saturation(g));
  CHECK(blocks.core_dim == 1);
  REQUIRE(blocks.order.size() == 2);
  CHECK(blocks.order[0] == g.vertex_index("v"));
  CHECK(blocks.core(0, 0) == 2);
  CHECK(blocks.coupling(0, 0) == 1);
  CHECK(blocks.saturated(0, 0) == 0);
}

TEST_CASE("the saturated block is strictly triangular") {
  // every edge into a saturated vertex comes from a strictly earlier level,
  // so the block ordered by descending level has zeros on and below the
  // diagonal
  for (const char* name : {"chain3.json", "diamond.json", "two_loops_source.json"}) {
    const DirectedGraph g = kmstest::load_fixture(name);
    const BlockDecomposition blocks = block_decomposition(g, source_saturation(g));
    const int h = blocks.saturated.rows();
    for (int i = 0; i < h; ++i)
      for (int j = 0; j <= i; ++j) CHECK(blocks.saturated(i, j) == 0);
  }
}

TEST_CASE("subgraph excluding a hereditary set") {
  const DirectedGraph g = kmstest::load_fixture("two_loops_source.json");
  const std::vector<int> removed = {g.vertex_index("w")};
  const InducedSubgraph sub = subgraph_excluding(g, removed);
  CHECK(sub.graph.vertex_count() == 1);
  CHECK(sub.graph.edge_count() == 2);
  CHECK(sub.to_parent == std::vector<int>{g.vertex_index("v")});

  // removing v would dangle the loops at v
  const std::vector<int> bad = {g.vertex_index("v")};
  CHECK_THROWS_AS(subgraph_excluding(g, bad), Error);
}
