#include "kmsgraph/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {
namespace {

void write_value(const nlohmann::json& j, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        write_value(value, out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        write_value(value, out);
      }
      out += ']';
      break;
    }
    case value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      // strings (with escaping), integers, booleans, null
      out += j.dump();
      break;
  }
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) throw InternalError("non-finite value reached serialization");
  if (x == 0.0) x = 0.0;  // collapse -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string canonical_json(const nlohmann::json& j) {
  std::string out;
  write_value(j, out);
  return out;
}

nlohmann::json vector_to_json(const DirectedGraph& g, const std::vector<double>& by_vertex) {
  if (static_cast<int>(by_vertex.size()) != g.vertex_count())
    throw InternalError("vertex vector has the wrong dimension");
  nlohmann::json out = nlohmann::json::object();
  for (int v = 0; v < g.vertex_count(); ++v) out[g.vertex_name(v)] = by_vertex[v];
  return out;
}

nlohmann::json state_to_json(const DirectedGraph& g, const KmsStateDescriptor& state) {
  nlohmann::json out = nlohmann::json::object();
  out["q"] = state.q;
  if (state.q > 0.0)
    out["beta"] = -std::log(state.q);
  else
    out["beta"] = "inf";
  out["kind"] = to_string(state.kind);
  out["factors_through_ck"] = state.factors_through_ck;
  out["m"] = vector_to_json(g, state.m);
  out["epsilon"] = vector_to_json(g, state.epsilon);
  return out;
}

nlohmann::json report_to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& check : report.checks) {
    nlohmann::json row = nlohmann::json::object();
    row["name"] = check.name;
    row["deviation"] = check.deviation;
    row["tolerance"] = check.tolerance;
    row["pass"] = check.pass;
    checks.push_back(std::move(row));
  }
  nlohmann::json out = nlohmann::json::object();
  out["all_pass"] = report.all_pass();
  out["checks"] = std::move(checks);
  return out;
}

nlohmann::json beta_range_to_json(const DirectedGraph& g, const BetaRangeReport& report) {
  nlohmann::json out = nlohmann::json::object();
  out["vertices"] = g.vertex_count();
  out["edges"] = g.edge_count();
  out["rho"] = report.rho;
  if (report.critical_beta)
    out["critical_beta"] = *report.critical_beta;
  else
    out["critical_beta"] = "-inf";
  out["strongly_connected"] = report.graph_strongly_connected;
  out["toeplitz_extreme_count"] = report.toeplitz_extreme_count;
  out["ck_extreme_count"] = report.ck_extreme_count;
  out["critical_state_exists"] = report.critical_state_exists;
  if (report.critical_state_unique)
    out["critical_state_unique"] = *report.critical_state_unique;
  else
    out["critical_state_unique"] = nullptr;
  switch (report.below_critical) {
    case BelowCritical::None: out["below_critical"] = "none"; break;
    case BelowCritical::Unknown: out["below_critical"] = "unknown"; break;
    case BelowCritical::NotApplicable: out["below_critical"] = "not-applicable"; break;
  }
  return out;
}

nlohmann::json spectral_to_json(const SpectralReport& report) {
  nlohmann::json out = nlohmann::json::object();
  out["rho"] = report.rho;
  out["classification"] = to_string(report.classification);
  out["iterations"] = report.iterations;
  out["residual"] = report.residual;
  return out;
}

std::vector<double> vector_from_json(const DirectedGraph& g, const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("vertex vector must be a JSON object");
  std::vector<double> out(g.vertex_count(), 0.0);
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto& [key, value] : j.items()) {
    int v = -1;
    try {
      v = g.vertex_index(key);
    } catch (const Error&) {
      throw ParseError("vertex vector names unknown vertex '" + key + "'");
    }
    if (!value.is_number()) throw ParseError("entry for vertex '" + key + "' is not a number");
    if (seen[v]) throw ParseError("vertex '" + key + "' repeated in vector");
    seen[v] = true;
    out[v] = value.get<double>();
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!seen[v]) throw ParseError("vertex vector is missing vertex '" + g.vertex_name(v) + "'");
  return out;
}

}  // namespace kmsgraph
