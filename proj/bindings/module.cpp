#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kmsgraph/errors.hpp"
#include "kmsgraph/graph.hpp"
#include "kmsgraph/json_io.hpp"
#include "kmsgraph/kms.hpp"
#include "kmsgraph/oracle.hpp"
#include "kmsgraph/spectral.hpp"

namespace py = pybind11;
using namespace kmsgraph;

namespace {

std::vector<double> eps_from_dict(const DirectedGraph& g, const py::dict& d) {
  std::vector<double> eps(g.vertex_count(), 0.0);
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& item : d) {
    const int v = g.vertex_index(py::cast<std::string>(item.first));
    eps[v] = py::cast<double>(item.second);
    seen[v] = true;
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!seen[v])
      throw ParseError("vector is missing vertex '" + g.vertex_name(v) + "'");
  return eps;
}

py::dict vector_to_dict(const DirectedGraph& g, const std::vector<double>& values) {
  py::dict out;
  for (int v = 0; v < g.vertex_count(); ++v)
    out[py::str(g.vertex_name(v))] = values[v];
  return out;
}

py::dict state_to_dict(const DirectedGraph& g, const KmsStateDescriptor& st) {
  py::dict out;
  out["q"] = st.q;
  if (st.q > 0.0)
    out["beta"] = -std::log(st.q);
  else
    out["beta"] = std::numeric_limits<double>::infinity();
  out["kind"] = std::string(to_string(st.kind));
  out["factors_through_ck"] = st.factors_through_ck;
  out["m"] = vector_to_dict(g, st.m);
  out["epsilon"] = vector_to_dict(g, st.epsilon);
  return out;
}

py::dict report_to_dict(const VerificationReport& report) {
  py::list checks;
  for (const auto& check : report.checks) {
    py::dict row;
    row["name"] = check.name;
    row["deviation"] = check.deviation;
    row["tolerance"] = check.tolerance;
    row["pass"] = check.pass;
    checks.append(row);
  }
  py::dict out;
  out["all_pass"] = report.all_pass();
  out["checks"] = checks;
  return out;
}

KmsStateDescriptor state_from_args(const DirectedGraph& g, double q, const py::dict& eps) {
  const std::vector<double> e = eps_from_dict(g, eps);
  return q == 0.0 ? ground_state(g, e) : toeplitz_state(g, q, e);
}

}  // namespace

PYBIND11_MODULE(_kmsgraph, m) {
  m.doc() = "KMS states of the gauge action on graph Toeplitz algebras";

  py::register_exception<ParseError>(m, "GraphParseError", PyExc_ValueError);
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", PyExc_ValueError);

  py::class_<DirectedGraph>(m, "Graph")
      .def_static("from_json", [](const std::string& text) { return DirectedGraph::parse(text); },
                  py::arg("text"), "Parse a graph document with vertices and edges arrays.")
      .def_property_readonly("vertex_count", &DirectedGraph::vertex_count)
      .def_property_readonly("edge_count", &DirectedGraph::edge_count)
      .def_property_readonly("vertices",
                             [](const DirectedGraph& g) {
                               std::vector<std::string> names;
                               for (int v = 0; v < g.vertex_count(); ++v)
                                 names.push_back(g.vertex_name(v));
                               return names;
                             })
      .def_property_readonly("edges",
                             [](const DirectedGraph& g) {
                               py::list out;
                               for (int e = 0; e < g.edge_count(); ++e) {
                                 py::dict row;
                                 row["id"] = g.edge(e).id;
                                 row["range"] = g.vertex_name(g.edge(e).range);
                                 row["source"] = g.vertex_name(g.edge(e).source);
                                 out.append(row);
                               }
                               return out;
                             })
      .def("adjacency",
           [](const DirectedGraph& g) {
             const IntMatrix a = vertex_matrix(g);
             std::vector<std::vector<long long>> rows(g.vertex_count());
             for (int i = 0; i < g.vertex_count(); ++i)
               for (int j = 0; j < g.vertex_count(); ++j) rows[i].push_back(a(i, j));
             return rows;
           },
           "Vertex adjacency counts A[v][w] = number of edges from w into v.");

  m.def("spectral_radius",
        [](const DirectedGraph& g) {
          const SpectralReport report = spectral_radius(vertex_matrix(g));
          py::dict out;
          out["rho"] = report.rho;
          out["classification"] = std::string(to_string(report.classification));
          out["iterations"] = report.iterations;
          out["residual"] = report.residual;
          return out;
        },
        py::arg("graph"));

  m.def("analyze",
        [](const DirectedGraph& g) {
          const BetaRangeReport report = beta_range_report(g);
          py::dict out;
          out["rho"] = report.rho;
          if (report.critical_beta)
            out["critical_beta"] = *report.critical_beta;
          else
            out["critical_beta"] = -std::numeric_limits<double>::infinity();
          out["strongly_connected"] = report.graph_strongly_connected;
          out["toeplitz_extreme_count"] = report.toeplitz_extreme_count;
          out["ck_extreme_count"] = report.ck_extreme_count;
          out["critical_state_exists"] = report.critical_state_exists;
          if (report.critical_state_unique)
            out["critical_state_unique"] = *report.critical_state_unique;
          else
            out["critical_state_unique"] = py::none();
          return out;
        },
        py::arg("graph"), "Temperature ranges and simplex dimensions.");

  m.def("y_vector",
        [](const DirectedGraph& g, double q) { return vector_to_dict(g, y_vector(g, q)); },
        py::arg("graph"), py::arg("q"));

  m.def("simplex_extreme_points",
        [](const DirectedGraph& g, double q) {
          py::list out;
          for (const auto& eps : simplex_extreme_points(g, q))
            out.append(state_to_dict(g, toeplitz_state(g, q, eps)));
          return out;
        },
        py::arg("graph"), py::arg("q"));

  m.def("state",
        [](const DirectedGraph& g, double q, const py::dict& eps) {
          return state_to_dict(g, state_from_args(g, q, eps));
        },
        py::arg("graph"), py::arg("q"), py::arg("epsilon"),
        "KMS_beta state for q = e^{-beta} > 0, or the ground state for q = 0.");

  m.def("critical_state",
        [](const DirectedGraph& g) {
          const KmsStateDescriptor st = strongly_connected(g)
                                            ? critical_state_irreducible(g)
                                            : critical_state_with_sources(g);
          return state_to_dict(g, st);
        },
        py::arg("graph"));

  m.def("verify",
        [](const DirectedGraph& g, double q, const py::dict& eps, int depth, int pairs) {
          const KmsStateDescriptor st = state_from_args(g, q, eps);
          if (depth <= 0) depth = choose_depth(g, st.q, st.epsilon).depth;
          const TruncatedRep rep = build_truncated_rep(g, depth);
          const Weights weights = state_weights(rep, st.q, st.epsilon);

          std::vector<Path> words;
          for (int len = 0; len <= 2; ++len)
            for (Path& p : enumerate_paths(g, len)) words.push_back(std::move(p));
          std::vector<SpanningElement> pool;
          for (const Path& mu : words)
            for (const Path& nu : words) {
              if (mu.source() != nu.source()) continue;
              if (static_cast<int>(pool.size()) >= 64) break;
              pool.emplace_back(mu, nu);
            }
          std::vector<std::pair<SpanningElement, SpanningElement>> sampled;
          for (std::size_t i = 0; i < pool.size() && static_cast<int>(sampled.size()) < pairs; ++i)
            for (std::size_t j = 0; j < pool.size() && static_cast<int>(sampled.size()) < pairs; ++j)
              sampled.emplace_back(pool[i], pool[j]);

          const VerificationReport tck = check_tck_relations(rep);
          const VerificationReport kms = kms_condition_check(g, st, rep, weights, sampled);
          py::dict out;
          out["all_pass"] = tck.all_pass() && kms.all_pass();
          out["basis"] = rep.size();
          out["depth"] = depth;
          out["tail_mass"] = weights.tail_mass;
          out["tck"] = report_to_dict(tck);
          out["kms"] = report_to_dict(kms);
          return out;
        },
        py::arg("graph"), py::arg("q"), py::arg("epsilon"), py::arg("depth") = 0,
        py::arg("pairs") = 240,
        "Check the state against the truncated path-space representation.");

  m.def("cylinder_measure",
        [](const DirectedGraph& g, double q, const py::dict& eps,
           const std::vector<std::string>& edge_ids) {
          if (edge_ids.empty())
            throw ParseError("cylinder paths need at least one edge id");
          std::vector<int32_t> edges;
          for (const auto& id : edge_ids) edges.push_back(g.edge_index(id));
          const Path alpha(g, edges);
          return cylinder_measure(g, q, eps_from_dict(g, eps), alpha);
        },
        py::arg("graph"), py::arg("q"), py::arg("epsilon"), py::arg("edge_ids"),
        "Measure of the cylinder of paths extending the given path.");
}
