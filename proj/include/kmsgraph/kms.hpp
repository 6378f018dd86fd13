#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kmsgraph/graph.hpp"
#include "kmsgraph/spectral.hpp"
#include "kmsgraph/tolerances.hpp"

namespace kmsgraph {

/// Inverse temperature carried as q = e^{-beta}; q in (0, infinity), with
/// beta < 0 meaning q > 1.
class Temperature {
 public:
  static Temperature from_q(double q);
  static Temperature from_beta(double beta);
  double q() const { return q_; }
  double beta() const;

 private:
  explicit Temperature(double q) : q_(q) {}
  double q_;
};

enum class StateKind { Toeplitz, CuntzKrieger, Critical, Ground };

std::string_view to_string(StateKind k);

/// A KMS state of the gauge action on the Toeplitz algebra of a graph, in
/// the normal form phi(s_mu s_nu^*) = [mu == nu] q^{|mu|} m_{s(mu)}.
/// Invariants: m is a probability vector and (I - qA) m = epsilon.  Ground
/// states are the q = 0 instance, where m = epsilon.
struct KmsStateDescriptor {
  double q = 0.0;
  std::vector<double> m;
  std::vector<double> epsilon;
  StateKind kind = StateKind::Toeplitz;
  bool factors_through_ck = false;
};

/// s_mu s_nu^* with s(mu) = s(nu), or the additive zero so the product
/// formula is total.
class SpanningElement {
 public:
  SpanningElement(Path mu, Path nu);
  static SpanningElement zero();

  bool is_zero() const { return zero_; }
  const Path& mu() const;
  const Path& nu() const;
  int degree() const;  // |mu| - |nu|

  bool operator==(const SpanningElement&) const = default;

 private:
  SpanningElement() : zero_(true) {}
  bool zero_ = false;
  Path mu_ = Path::at_vertex(0), nu_ = Path::at_vertex(0);
};

/// The vertex projection p_v = s_v s_v^*.
SpanningElement vertex_projection(int v);

/// The critical value of q, i.e. 1 / rho(A).  Uses the structural
/// classification when it pins the radius exactly and the numerical radius
/// otherwise.  Throws AdmissibilityError when the graph is acyclic, where
/// every temperature is admissible and no critical value exists.
double critical_q(const DirectedGraph& g);

/// Checks q > 0 and q rho(A) < 1 - margin; throws AdmissibilityError with
/// the required range in the message.
void require_admissible(const DirectedGraph& g, double q);

/// y_v = sum over paths with source v of q^{|path|}, computed as the
/// solution of (I - qA)^T y = 1.  Every entry is at least one.
std::vector<double> y_vector(const DirectedGraph& g, double q);

/// Extreme points of the weight simplex { eps >= 0 : eps . y = 1 }: the
/// vector concentrated at u with value 1 / y_u, one per vertex in canonical
/// order.
std::vector<std::vector<double>> simplex_extreme_points(const DirectedGraph& g, double q);

/// m = (I - qA)^{-1} eps.  When eps . y = 1 the result is a probability
/// vector.
std::vector<double> measure_from_epsilon(const DirectedGraph& g, double q,
                                         std::span<const double> eps);

/// eps = (I - qA) m; negative entries witness a failure of subinvariance.
std::vector<double> epsilon_from_measure(const DirectedGraph& g, double q,
                                         std::span<const double> m);

/// True when the state with boundary weight eps kills every defect
/// projection p_v - sum_{e in vE^1} s_e s_e^*, i.e. eps vanishes on every
/// vertex that receives an edge.
bool factors_through_ck(const DirectedGraph& g, std::span<const double> eps,
                        double tolerance = tol::epsilon_support);

/// Extreme points of the sub-simplex of weights supported on the vertices
/// that receive no edges; those are exactly the states that descend to the
/// Cuntz-Krieger quotient.
std::vector<std::vector<double>> ck_simplex_extreme_points(const DirectedGraph& g, double q);

/// The state above critical temperature with boundary weight eps in the
/// simplex; validates eps >= 0 and eps . y = 1.
KmsStateDescriptor toeplitz_state(const DirectedGraph& g, double q, std::span<const double> eps);

/// phi(s_mu s_nu^*) for the descriptor: [mu == nu] q^{|mu|} m_{s(mu)}.
double state_value(const KmsStateDescriptor& state, const SpanningElement& a);

/// The unique critical state of a strongly connected graph: q = 1/rho and
/// m the Perron vector.
KmsStateDescriptor critical_state_irreducible(const DirectedGraph& g);

/// Critical state of a graph whose source saturation H leaves a strongly
/// connected complement, under the preconditions of that construction:
/// no sinks and a strongly connected complement.  m carries the Perron
/// vector of the complement block and vanishes on H, so the state descends
/// to the Cuntz-Krieger quotient.
KmsStateDescriptor critical_state_with_sources(const DirectedGraph& g);

/// Critical state built from a user-supplied probability vector m, which
/// must satisfy A m <= rho(A) m entrywise.
KmsStateDescriptor critical_state_from_measure(const DirectedGraph& g, std::span<const double> m);

/// Ground state with vertex distribution eps (a probability vector);
/// annihilates every s_mu s_nu^* with an edge.  Encoded with q = 0.
KmsStateDescriptor ground_state(const DirectedGraph& g, std::span<const double> eps);

enum class BelowCritical { None, Unknown, NotApplicable };

struct BetaRangeReport {
  double rho = 0.0;
  std::optional<double> critical_beta;  // nullopt: acyclic, no critical value
  int toeplitz_extreme_count = 0;       // |E^0|, above critical
  int ck_extreme_count = 0;             // number of vertices receiving no edge
  bool critical_state_exists = false;
  std::optional<bool> critical_state_unique;  // nullopt when not settled
  BelowCritical below_critical = BelowCritical::Unknown;
  bool graph_strongly_connected = false;
};

/// Summary of the admissible temperature range and the simplex sizes.
BetaRangeReport beta_range_report(const DirectedGraph& g);

}  // namespace kmsgraph
