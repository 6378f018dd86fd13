#include "kmsgraph/kms.hpp"

#include <cmath>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {

Temperature Temperature::from_q(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw AdmissibilityError("q must be a finite positive number");
  return Temperature(q);
}

Temperature Temperature::from_beta(double beta) {
  if (!std::isfinite(beta)) throw AdmissibilityError("beta must be finite");
  return Temperature(std::exp(-beta));
}

double Temperature::beta() const { return -std::log(q_); }

std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::Toeplitz:
      return "Toeplitz";
    case StateKind::CuntzKrieger:
      return "CuntzKrieger";
    case StateKind::Critical:
      return "Critical";
    case StateKind::Ground:
      return "Ground";
  }
  return "Toeplitz";
}

SpanningElement::SpanningElement(Path mu, Path nu) : mu_(std::move(mu)), nu_(std::move(nu)) {
  if (mu_.source() != nu_.source())
    throw Error("spanning element paths must share their source vertex");
}

SpanningElement SpanningElement::zero() { return SpanningElement(); }

const Path& SpanningElement::mu() const {
  if (zero_) throw Error("the zero element has no paths");
  return mu_;
}

const Path& SpanningElement::nu() const {
  if (zero_) throw Error("the zero element has no paths");
  return nu_;
}

int SpanningElement::degree() const {
  if (zero_) return 0;
  return mu_.length() - nu_.length();
}

SpanningElement vertex_projection(int v) {
  return SpanningElement(Path::at_vertex(v), Path::at_vertex(v));
}

double critical_q(const DirectedGraph& g) {
  switch (classify_graph_spectrum(g)) {
    case SpectrumClass::Zero:
      throw AdmissibilityError("acyclic graph: every temperature is admissible");
    case SpectrumClass::One:
      return 1.0;
    default:
      return 1.0 / spectral_radius(vertex_matrix(g)).rho;
  }
}

void require_admissible(const DirectedGraph& g, double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw AdmissibilityError("q must be a finite positive number");
  const double rho = spectral_radius(vertex_matrix(g)).rho;
  if (q * rho >= 1.0 - tol::admissibility_margin)
    throw AdmissibilityError("inadmissible temperature: requires beta > ln(rho) = " +
                             std::to_string(std::log(rho)) + ", i.e. q < " +
                             std::to_string(1.0 / rho));
}

namespace {

Matrix resolvent_matrix(const DirectedGraph& g, double q) {
  const IntMatrix a = vertex_matrix(g);
  Matrix m(g.vertex_count(), g.vertex_count());
  for (int i = 0; i < g.vertex_count(); ++i)
    for (int j = 0; j < g.vertex_count(); ++j)
      m(i, j) = (i == j ? 1.0 : 0.0) - q * static_cast<double>(a(i, j));
  return m;
}

void require_size(const DirectedGraph& g, std::span<const double> v, const char* what) {
  if (static_cast<int>(v.size()) != g.vertex_count())
    throw Error(std::string(what) + " must have one entry per vertex");
}

void require_nonnegative(std::span<const double> v, const char* what) {
  for (double x : v)
    if (x < -1e-12) throw AdmissibilityError(std::string(what) + " must be nonnegative");
}

}  // namespace

std::vector<double> y_vector(const DirectedGraph& g, double q) {
  require_admissible(g, q);
  const std::vector<double> ones(g.vertex_count(), 1.0);
  return solve_linear(resolvent_matrix(g, q).transposed(), ones);
}

std::vector<std::vector<double>> simplex_extreme_points(const DirectedGraph& g, double q) {
  const std::vector<double> y = y_vector(g, q);
  std::vector<std::vector<double>> out;
  for (int u = 0; u < g.vertex_count(); ++u) {
    std::vector<double> eps(g.vertex_count(), 0.0);
    eps[u] = 1.0 / y[u];
    out.push_back(std::move(eps));
  }
  return out;
}

std::vector<double> measure_from_epsilon(const DirectedGraph& g, double q,
                                         std::span<const double> eps) {
  require_size(g, eps, "epsilon");
  require_nonnegative(eps, "epsilon");
  require_admissible(g, q);
  return solve_linear(resolvent_matrix(g, q), eps);
}

std::vector<double> epsilon_from_measure(const DirectedGraph& g, double q,
                                         std::span<const double> m) {
  require_size(g, m, "m");
  return resolvent_matrix(g, q).apply(m);
}

bool factors_through_ck(const DirectedGraph& g, std::span<const double> eps, double tolerance) {
  require_size(g, eps, "epsilon");
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!g.edges_into(v).empty() && eps[v] > tolerance) return false;
  return true;
}

std::vector<std::vector<double>> ck_simplex_extreme_points(const DirectedGraph& g, double q) {
  const std::vector<double> y = y_vector(g, q);
  std::vector<std::vector<double>> out;
  for (int u : source_vertices(g)) {
    std::vector<double> eps(g.vertex_count(), 0.0);
    eps[u] = 1.0 / y[u];
    out.push_back(std::move(eps));
  }
  return out;
}

KmsStateDescriptor toeplitz_state(const DirectedGraph& g, double q, std::span<const double> eps) {
  require_size(g, eps, "epsilon");
  require_nonnegative(eps, "epsilon");
  const std::vector<double> y = y_vector(g, q);
  double pairing = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) pairing += eps[v] * y[v];
  if (std::fabs(pairing - 1.0) > tol::simplex_membership)
    throw AdmissibilityError("epsilon lies outside the weight simplex: eps . y = " +
                             std::to_string(pairing));
  KmsStateDescriptor state;
  state.q = q;
  state.epsilon.assign(eps.begin(), eps.end());
  state.m = solve_linear(resolvent_matrix(g, q), eps);
  state.kind = StateKind::Toeplitz;
  state.factors_through_ck = factors_through_ck(g, state.epsilon);
  return state;
}

double state_value(const KmsStateDescriptor& state, const SpanningElement& a) {
  if (a.is_zero()) return 0.0;
  if (!(a.mu() == a.nu())) return 0.0;
  return pow_int(state.q, a.mu().length()) * state.m[a.mu().source()];
}

KmsStateDescriptor critical_state_irreducible(const DirectedGraph& g) {
  if (!strongly_connected(g))
    throw AdmissibilityError("critical state construction needs a strongly connected graph");
  const double q = critical_q(g);
  const PerronVector perron = perron_vector(vertex_matrix(g));
  KmsStateDescriptor state;
  state.q = q;
  state.m = perron.x;
  state.epsilon = epsilon_from_measure(g, q, state.m);
  state.kind = StateKind::Critical;
  state.factors_through_ck = factors_through_ck(g, state.epsilon);
  return state;
}

KmsStateDescriptor critical_state_with_sources(const DirectedGraph& g) {
  if (!sink_vertices(g).empty())
    throw AdmissibilityError("critical state with sources needs a graph without sinks");
  const SaturationChain chain = source_saturation(g);
  if (chain.closure().empty()) return critical_state_irreducible(g);
  const InducedSubgraph sub = subgraph_excluding(g, chain.closure());
  if (!strongly_connected(sub.graph))
    throw AdmissibilityError(
        "critical state with sources needs a strongly connected complement of the saturation");
  const double q = critical_q(sub.graph);
  const PerronVector perron = perron_vector(vertex_matrix(sub.graph));
  KmsStateDescriptor state;
  state.q = q;
  state.m.assign(g.vertex_count(), 0.0);
  for (size_t i = 0; i < sub.to_parent.size(); ++i) state.m[sub.to_parent[i]] = perron.x[i];
  state.epsilon = epsilon_from_measure(g, q, state.m);
  state.kind = StateKind::CuntzKrieger;
  state.factors_through_ck = factors_through_ck(g, state.epsilon);
  return state;
}

KmsStateDescriptor critical_state_from_measure(const DirectedGraph& g,
                                               std::span<const double> m) {
  require_size(g, m, "m");
  require_nonnegative(m, "m");
  const SpectralReport spectrum = spectral_radius(vertex_matrix(g));
  if (spectrum.classification == SpectrumClass::Zero)
    throw AdmissibilityError("acyclic graph: no critical temperature exists");
  double total = 0.0;
  for (double x : m) total += x;
  if (std::fabs(total - 1.0) > tol::probability_sum)
    throw AdmissibilityError("m must be a probability vector");
  const double q = classify_graph_spectrum(g) == SpectrumClass::One ? 1.0 : 1.0 / spectrum.rho;
  const SubinvarianceCheck check = check_subinvariant(vertex_matrix(g), m, q);
  if (!check.ok)
    throw AdmissibilityError("m is not subinvariant at the critical temperature");
  KmsStateDescriptor state;
  state.q = q;
  state.m.assign(m.begin(), m.end());
  state.epsilon = epsilon_from_measure(g, q, state.m);
  state.kind = StateKind::Critical;
  state.factors_through_ck = factors_through_ck(g, state.epsilon);
  return state;
}

KmsStateDescriptor ground_state(const DirectedGraph& g, std::span<const double> eps) {
  require_size(g, eps, "epsilon");
  require_nonnegative(eps, "epsilon");
  double total = 0.0;
  for (double x : eps) total += x;
  if (std::fabs(total - 1.0) > tol::probability_sum)
    throw AdmissibilityError("epsilon must be a probability vector");
  KmsStateDescriptor state;
  state.q = 0.0;
  state.epsilon.assign(eps.begin(), eps.end());
  state.m = state.epsilon;
  state.kind = StateKind::Ground;
  state.factors_through_ck = factors_through_ck(g, state.epsilon);
  return state;
}

BetaRangeReport beta_range_report(const DirectedGraph& g) {
  BetaRangeReport report;
  const SpectralReport spectrum = spectral_radius(vertex_matrix(g));
  report.rho = spectrum.rho;
  report.toeplitz_extreme_count = g.vertex_count();
  report.ck_extreme_count = static_cast<int>(source_vertices(g).size());
  report.graph_strongly_connected = strongly_connected(g);
  if (spectrum.classification == SpectrumClass::Zero) {
    report.critical_beta = std::nullopt;
    report.critical_state_exists = false;
    report.critical_state_unique = std::nullopt;
    report.below_critical = BelowCritical::NotApplicable;
    return report;
  }
  report.critical_beta =
      classify_graph_spectrum(g) == SpectrumClass::One ? 0.0 : std::log(spectrum.rho);
  // A nonnegative matrix always has a nonnegative eigenvector at its
  // spectral radius, so a critical state exists whenever rho > 0.
  report.critical_state_exists = true;
  if (report.graph_strongly_connected) {
    report.critical_state_unique = true;
    report.below_critical = BelowCritical::None;
  } else {
    report.critical_state_unique = std::nullopt;
    report.below_critical = BelowCritical::Unknown;
  }
  return report;
}

}  // namespace kmsgraph
