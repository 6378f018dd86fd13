#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kmsgraph/graph.hpp"
#include "kmsgraph/kms.hpp"
#include "kmsgraph/tolerances.hpp"

namespace kmsgraph {

/// Product of spanning elements by prefix comparison:
/// (s_mu s_nu^*)(s_alpha s_beta^*) equals s_{mu alpha'} s_beta^* when
/// alpha = nu alpha', equals s_mu s_{beta nu'}^* when nu = alpha nu', and
/// vanishes otherwise.
SpanningElement multiply_spanning(const SpanningElement& a, const SpanningElement& b);

/// Basis cap for truncated representations; the environment variable
/// KMSGRAPH_MAX_BASIS overrides the built-in default of 20000.
int default_basis_cap();

/// The representation on paths of length at most depth.  Every operator is
/// a partial permutation of the basis, so it is stored as an index map with
/// -1 for annihilated vectors; matrix entries stay exactly 0 or 1 and all
/// operator identities are checked in integer arithmetic.  The edge
/// operator T_e prepends e and annihilates paths of full length; its
/// adjoint strips e.
struct TruncatedRep {
  int depth = 0;
  std::vector<Path> basis;             // level-major, lexicographic inside a level
  std::vector<int> level_offset;      // level n occupies [offset[n], offset[n+1])
  std::vector<std::vector<int32_t>> t;       // per edge
  std::vector<std::vector<int32_t>> t_star;  // per edge
  std::vector<int32_t> range_of;             // r(basis[i]), diagonal of the Q_v
  std::vector<int32_t> edge_range, edge_source;

  int size() const { return static_cast<int>(basis.size()); }
  /// Indices of paths shorter than the full depth, where truncation is
  /// invisible.
  int interior_size() const { return level_offset[depth]; }
};

/// Throws AdmissibilityError when the basis would exceed the cap
/// (cap <= 0 selects default_basis_cap()).
TruncatedRep build_truncated_rep(const DirectedGraph& g, int depth, int basis_cap = 0);

/// The composed partial permutation of pi(s_mu s_nu^*) as a product of the
/// per-edge maps.
std::vector<int32_t> rep_apply(const TruncatedRep& rep, const SpanningElement& a);

/// Diagonal weights Delta_mu = q^{|mu|} eps_{s(mu)} over the basis.  When
/// eps lies in the weight simplex the full series sums to one, so the tail
/// mass is one minus the partial sum (clamped at zero against rounding).
struct Weights {
  std::vector<double> delta;
  double total = 0.0;
  double tail_mass = 0.0;
};

Weights state_weights(const TruncatedRep& rep, double q, std::span<const double> eps);

/// Smallest depth whose tail mass drops below the tolerance, respecting the
/// basis cap; tail_met reports whether the tolerance was reached before the
/// cap.
struct DepthChoice {
  int depth = 1;
  double predicted_tail = 0.0;
  bool tail_met = false;
};

DepthChoice choose_depth(const DirectedGraph& g, double q, std::span<const double> eps,
                         double tail_tol = tol::oracle_tail, int basis_cap = 0);

struct OracleValue {
  double value = 0.0;
  double error_bound = 0.0;  // the tail mass
};

/// sum over the basis of Delta_mu (pi(a) h_mu | h_mu); within tail mass of
/// the state value, independently of the resolvent route.
OracleValue oracle_state_value(const TruncatedRep& rep, const Weights& weights,
                               const SpanningElement& a);

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Operator identities of the generating family on the interior subspace:
/// T_e^* T_e = Q_{s(e)}, mutual orthogonality T_e^* T_f = 0, the domination
/// Q_v >= sum of T_e T_e^* over any set of received edges, and the
/// partition of the identity by the Q_v.  Exact integer comparisons.
VerificationReport check_tck_relations(const TruncatedRep& rep);

/// The equilibrium condition phi(ab) = q^{deg a} phi(ba) on sampled pairs,
/// three ways: symbolically through the product formula, through the
/// truncated representation, and as a cross check of the two routes, which
/// catches descriptors whose m does not come from the resolvent of epsilon.
VerificationReport kms_condition_check(
    const DirectedGraph& g, const KmsStateDescriptor& state, const TruncatedRep& rep,
    const Weights& weights,
    std::span<const std::pair<SpanningElement, SpanningElement>> pairs);

/// Measure of the cylinder of paths extending alpha, q^{|alpha|} m_{s(alpha)}.
double cylinder_measure(const DirectedGraph& g, double q, std::span<const double> eps,
                        const Path& alpha);
double cylinder_measure(const KmsStateDescriptor& state, const Path& alpha);

}  // namespace kmsgraph
