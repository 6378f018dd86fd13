#include "kmsgraph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {

SpanningElement multiply_spanning(const SpanningElement& a, const SpanningElement& b) {
  if (a.is_zero() || b.is_zero()) return SpanningElement::zero();
  // alpha = nu alpha': the adjoint leg of a cancels into the head of b.
  if (auto rest = factorize_path(b.mu(), a.nu()))
    return SpanningElement(concat(a.mu(), *rest), b.nu());
  // nu = alpha nu': b cancels partially and extends the adjoint leg.
  if (auto rest = factorize_path(a.nu(), b.mu()))
    return SpanningElement(a.mu(), concat(b.nu(), *rest));
  return SpanningElement::zero();
}

int default_basis_cap() {
  if (const char* env = std::getenv("KMSGRAPH_MAX_BASIS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<int>(value);
  }
  return 20000;
}

TruncatedRep build_truncated_rep(const DirectedGraph& g, int depth, int basis_cap) {
  if (depth < 1) throw AdmissibilityError("representation depth must be at least 1");
  const int cap = basis_cap > 0 ? basis_cap : default_basis_cap();
  TruncatedRep rep;
  rep.depth = depth;
  rep.level_offset.push_back(0);
  for (int v = 0; v < g.vertex_count(); ++v) rep.basis.push_back(Path::at_vertex(v));
  rep.level_offset.push_back(rep.size());
  rep.t.assign(g.edge_count(), {});
  rep.t_star.assign(g.edge_count(), {});

  for (int level = 1; level <= depth; ++level) {
    const int begin = rep.level_offset[level - 1];
    const int end = rep.level_offset[level];
    // Prepending e to level n - 1 paths in edge-major order keeps each
    // level lexicographic.
    for (int e = 0; e < g.edge_count(); ++e) {
      const int at = g.edge(e).source;
      for (int i = begin; i < end; ++i) {
        if (rep.basis[i].range() != at) continue;
        if (rep.size() >= cap)
          throw AdmissibilityError("representation basis exceeds the cap of " +
                                   std::to_string(cap));
        std::vector<int32_t> edges;
        edges.reserve(rep.basis[i].length() + 1);
        edges.push_back(e);
        edges.insert(edges.end(), rep.basis[i].edges().begin(), rep.basis[i].edges().end());
        rep.basis.push_back(Path(g, std::move(edges)));
      }
    }
    rep.level_offset.push_back(rep.size());
  }

  for (int e = 0; e < g.edge_count(); ++e) {
    rep.t[e].assign(rep.size(), -1);
    rep.t_star[e].assign(rep.size(), -1);
  }
  // Match each level n+1 path to its tail at level n; the construction
  // order above lets us recover the pairing by scanning.
  for (int level = 1; level <= depth; ++level) {
    const int begin = rep.level_offset[level - 1];
    const int end = rep.level_offset[level];
    int child = rep.level_offset[level];
    for (int e = 0; e < g.edge_count(); ++e) {
      const int at = g.edge(e).source;
      for (int i = begin; i < end; ++i) {
        if (rep.basis[i].range() != at) continue;
        rep.t[e][i] = child;
        rep.t_star[e][child] = i;
        ++child;
      }
    }
  }

  rep.range_of.resize(rep.size());
  for (int i = 0; i < rep.size(); ++i) rep.range_of[i] = rep.basis[i].range();
  for (int e = 0; e < g.edge_count(); ++e) {
    rep.edge_range.push_back(g.edge(e).range);
    rep.edge_source.push_back(g.edge(e).source);
  }
  return rep;
}

std::vector<int32_t> rep_apply(const TruncatedRep& rep, const SpanningElement& a) {
  std::vector<int32_t> map(rep.size());
  if (a.is_zero()) {
    std::fill(map.begin(), map.end(), -1);
    return map;
  }
  for (int i = 0; i < rep.size(); ++i) map[i] = i;
  // T_nu^* strips the adjoint leg edge by edge, front first.
  for (int32_t e : a.nu().edges()) {
    for (int i = 0; i < rep.size(); ++i)
      if (map[i] >= 0) map[i] = rep.t_star[e][map[i]];
  }
  // The middle projection Q_{s(mu)} sits between the legs.  Stripping a
  // nonempty nu already lands on vectors ranged at s(nu) and prepending a
  // nonempty mu is confined the same way, so this only bites for the pure
  // vertex element s_u s_u^*, whose operator it is.
  const int32_t u = a.mu().source();
  for (int i = 0; i < rep.size(); ++i)
    if (map[i] >= 0 && rep.range_of[map[i]] != u) map[i] = -1;
  // T_mu prepends the forward leg back to front.
  const auto mu_edges = a.mu().edges();
  for (auto it = mu_edges.rbegin(); it != mu_edges.rend(); ++it) {
    for (int i = 0; i < rep.size(); ++i)
      if (map[i] >= 0) map[i] = rep.t[*it][map[i]];
  }
  return map;
}

Weights state_weights(const TruncatedRep& rep, double q, std::span<const double> eps) {
  Weights out;
  out.delta.resize(rep.size());
  for (int i = 0; i < rep.size(); ++i)
    out.delta[i] = pow_int(q, rep.basis[i].length()) * eps[rep.basis[i].source()];
  for (double d : out.delta) out.total += d;
  out.tail_mass = std::max(0.0, 1.0 - out.total);
  return out;
}

DepthChoice choose_depth(const DirectedGraph& g, double q, std::span<const double> eps,
                         double tail_tol, int basis_cap) {
  const int cap = basis_cap > 0 ? basis_cap : default_basis_cap();
  const IntMatrix a = vertex_matrix(g);
  // Level sums of the weights and basis counts, no path enumeration.
  std::vector<double> level(eps.begin(), eps.end());
  double partial = 0.0;
  for (double x : level) partial += x;
  std::vector<long long> counts(g.vertex_count(), 1);
  long long basis_size = g.vertex_count();

  DepthChoice choice;
  for (int depth = 1;; ++depth) {
    std::vector<double> next(g.vertex_count(), 0.0);
    for (int i = 0; i < g.vertex_count(); ++i)
      for (int j = 0; j < g.vertex_count(); ++j)
        next[i] += q * static_cast<double>(a(i, j)) * level[j];
    level = std::move(next);
    counts = a.apply(counts);
    long long level_size = 0;
    for (long long c : counts) level_size += std::min(c, IntMatrix::kSaturation / 4);
    if (basis_size + level_size > cap) {
      // The previous depth is the largest buildable one.
      choice.depth = std::max(1, depth - 1);
      choice.predicted_tail = std::max(0.0, 1.0 - partial);
      choice.tail_met = choice.predicted_tail < tail_tol && depth > 1;
      return choice;
    }
    basis_size += level_size;
    for (double x : level) partial += x;
    choice.depth = depth;
    choice.predicted_tail = std::max(0.0, 1.0 - partial);
    if (choice.predicted_tail < tail_tol) {
      choice.tail_met = true;
      return choice;
    }
  }
}

OracleValue oracle_state_value(const TruncatedRep& rep, const Weights& weights,
                               const SpanningElement& a) {
  OracleValue out;
  out.error_bound = weights.tail_mass;
  if (a.is_zero()) return out;
  const std::vector<int32_t> map = rep_apply(rep, a);
  for (int i = 0; i < rep.size(); ++i)
    if (map[i] == i) out.value += weights.delta[i];
  return out;
}

bool VerificationReport::all_pass() const {
  for (const CheckResult& check : checks)
    if (!check.pass) return false;
  return true;
}

namespace {

void push_check(VerificationReport& report, std::string name, double deviation,
                double tolerance) {
  report.checks.push_back(
      CheckResult{std::move(name), deviation, tolerance, deviation <= tolerance});
}

}  // namespace

VerificationReport check_tck_relations(const TruncatedRep& rep) {
  VerificationReport report;
  const int interior = rep.interior_size();
  const int edges = static_cast<int>(rep.t.size());
  const int total = rep.size();

  // T_e^* T_e = Q_{s(e)}, checked on the interior where truncation is
  // invisible.  Both sides are partial permutations, so equality is the
  // statement that the roundtrip fixes exactly the paths ranged at s(e).
  long long isometry_defects = 0;
  for (int e = 0; e < edges; ++e) {
    for (int i = 0; i < interior; ++i) {
      const int32_t forward = rep.t[e][i];
      const int32_t roundtrip = forward < 0 ? -1 : rep.t_star[e][forward];
      const int32_t q_value = rep.range_of[i] == rep.edge_source[e] ? i : -1;
      if (roundtrip != q_value) ++isometry_defects;
    }
  }
  push_check(report, "edge-isometry", static_cast<double>(isometry_defects), 0.0);

  // T_e^* T_f = 0 for e != f, on the whole space.
  long long orthogonality_defects = 0;
  for (int e = 0; e < edges; ++e)
    for (int f = 0; f < edges; ++f) {
      if (e == f) continue;
      for (int i = 0; i < total; ++i) {
        const int32_t forward = rep.t[f][i];
        if (forward >= 0 && rep.t_star[e][forward] >= 0) ++orthogonality_defects;
      }
    }
  push_check(report, "range-orthogonality", static_cast<double>(orthogonality_defects), 0.0);

  // Q_v >= sum of T_e T_e^* over any set of edges ranged at v.  All the
  // operators are 0/1 diagonal here, so the sharpest case is the full set:
  // each basis vector is hit by at most one range projection T_e T_e^*,
  // and a hit pins the vector under the matching Q_v.  T_e T_e^* fixes
  // h_lambda exactly when lambda starts with e, i.e. T_e^* keeps it.
  long long domination_defects = 0;
  for (int i = 0; i < interior; ++i) {
    int hits = 0, hit_range = -1;
    for (int e = 0; e < edges; ++e)
      if (rep.t_star[e][i] >= 0) {
        ++hits;
        hit_range = rep.edge_range[e];
      }
    if (hits > 1 || (hits == 1 && hit_range != rep.range_of[i]))
      ++domination_defects;
  }
  push_check(report, "defect-positivity", static_cast<double>(domination_defects), 0.0);

  // The vertex projections partition the identity: every basis vector is
  // fixed by exactly one Q_v, i.e. carries a well-defined range vertex.
  long long partition_defects = 0;
  for (int i = 0; i < total; ++i)
    if (rep.range_of[i] < 0) ++partition_defects;
  push_check(report, "vertex-partition", static_cast<double>(partition_defects), 0.0);

  return report;
}

VerificationReport kms_condition_check(
    const DirectedGraph& g, const KmsStateDescriptor& state, const TruncatedRep& rep,
    const Weights& weights,
    std::span<const std::pair<SpanningElement, SpanningElement>> pairs) {
  VerificationReport report;

  // Descriptor coherence: (I - qA) m = epsilon.
  const std::vector<double> eps_check = epsilon_from_measure(g, state.q, state.m);
  double coherence = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v)
    coherence = std::max(coherence, std::fabs(eps_check[v] - state.epsilon[v]));
  push_check(report, "resolvent-consistency", coherence, 1e-10);

  double symbolic_dev = 0.0;
  double oracle_dev = 0.0;
  double oracle_tol = 1e-12;
  double cross_dev = 0.0;
  for (const auto& [a, b] : pairs) {
    // phi(ab) = q^{deg a} phi(ba); for deg a < 0 multiply both sides by
    // q^{-deg a}, which keeps the powers nonnegative (and total at q = 0).
    const int deg = a.degree();
    const double lhs_scale = deg < 0 ? pow_int(state.q, -deg) : 1.0;
    const double rhs_scale = deg < 0 ? 1.0 : pow_int(state.q, deg);
    const SpanningElement ab = multiply_spanning(a, b);
    const SpanningElement ba = multiply_spanning(b, a);
    const double lhs = state_value(state, ab);
    const double rhs = state_value(state, ba);
    symbolic_dev = std::max(symbolic_dev, std::fabs(lhs_scale * lhs - rhs_scale * rhs));

    const OracleValue oracle_ab = oracle_state_value(rep, weights, ab);
    const OracleValue oracle_ba = oracle_state_value(rep, weights, ba);
    oracle_dev = std::max(
        oracle_dev, std::fabs(lhs_scale * oracle_ab.value - rhs_scale * oracle_ba.value));
    oracle_tol =
        std::max(oracle_tol, (lhs_scale + rhs_scale) * weights.tail_mass + 1e-12);
    cross_dev = std::max(cross_dev, std::fabs(lhs - oracle_ab.value));
    cross_dev = std::max(cross_dev, std::fabs(rhs - oracle_ba.value));
  }
  push_check(report, "kms-identity-symbolic", symbolic_dev, 1e-12);
  push_check(report, "kms-identity-oracle", oracle_dev, oracle_tol);
  push_check(report, "symbolic-vs-oracle", cross_dev, weights.tail_mass + 1e-9);
  return report;
}

double cylinder_measure(const DirectedGraph& g, double q, std::span<const double> eps,
                        const Path& alpha) {
  const std::vector<double> m = measure_from_epsilon(g, q, eps);
  return pow_int(q, alpha.length()) * m[alpha.source()];
}

double cylinder_measure(const KmsStateDescriptor& state, const Path& alpha) {
  return pow_int(state.q, alpha.length()) * state.m[alpha.source()];
}

}  // namespace kmsgraph
