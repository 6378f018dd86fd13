#include "kmsgraph/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "kmsgraph/errors.hpp"

namespace kmsgraph {

std::string_view to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::Zero:
      return "Zero";
    case SpectrumClass::One:
      return "One";
    case SpectrumClass::AtLeastOne:
      return "AtLeastOne";
    case SpectrumClass::GreaterThanOne:
      return "GreaterThanOne";
  }
  return "Zero";
}

namespace {

std::vector<std::vector<int>> matrix_adjacency(const IntMatrix& a) {
  // Walk j -> i when A(i, j) > 0, matching path existence from j to i.
  std::vector<std::vector<int>> adj(a.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (a(i, j) > 0) adj[j].push_back(i);
  return adj;
}

bool matrix_irreducible(const IntMatrix& a) {
  if (a.rows() == 1) return a(0, 0) > 0;
  return detail::tarjan_scc(matrix_adjacency(a)).size() == 1;
}

struct BlockResult {
  double rho = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> x;  // normalized to sum one
};

/// Power iteration on B + I for an irreducible block B.  B + I has a full
/// positive diagonal, hence is primitive, and its dominant eigenvalue is
/// 1 + rho(B) with the same eigenvector.
BlockResult irreducible_block_radius(const IntMatrix& b) {
  const int n = b.rows();
  BlockResult out;
  if (n == 1) {
    out.rho = static_cast<double>(b(0, 0));
    out.x = {1.0};
    return out;
  }
  const Matrix m = Matrix::from(b);
  std::vector<double> x(n, 1.0 / n);
  double previous = 0.0;
  for (int it = 1; it <= tol::max_power_iterations; ++it) {
    std::vector<double> z = m.apply(x);
    for (int i = 0; i < n; ++i) z[i] += x[i];
    double dot_xz = 0.0, dot_xx = 0.0, sum = 0.0;
    for (int i = 0; i < n; ++i) {
      dot_xz += x[i] * z[i];
      dot_xx += x[i] * x[i];
      sum += z[i];
    }
    const double rayleigh = dot_xz / dot_xx;
    for (int i = 0; i < n; ++i) x[i] = z[i] / sum;
    out.iterations = it;
    if (it > 1 && std::fabs(rayleigh - previous) < tol::rayleigh_stop) {
      previous = rayleigh;
      break;
    }
    previous = rayleigh;
  }
  out.rho = previous - 1.0;
  const std::vector<double> ax = m.apply(x);
  for (int i = 0; i < n; ++i)
    out.residual = std::max(out.residual, std::fabs(ax[i] - out.rho * x[i]));
  out.x = std::move(x);
  return out;
}

bool nilpotent(const IntMatrix& a) {
  // Exact: clamp entries to {0, 1} and take |E^0| powers.
  IntMatrix b = a;
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) b(i, j) = b(i, j) > 0 ? 1 : 0;
  IntMatrix power = b;
  for (int k = 1; k < a.rows(); ++k) {
    power = power * b;
    for (int i = 0; i < power.rows(); ++i)
      for (int j = 0; j < power.cols(); ++j) power(i, j) = power(i, j) > 0 ? 1 : 0;
  }
  return power.is_zero();
}

SpectrumClass band_of(double rho) {
  if (rho < tol::classification_band) return SpectrumClass::Zero;
  if (std::fabs(rho - 1.0) <= tol::classification_band) return SpectrumClass::One;
  if (rho > 1.0 + tol::classification_band) return SpectrumClass::GreaterThanOne;
  return SpectrumClass::AtLeastOne;
}

}  // namespace

SpectralReport spectral_radius(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InternalError("spectral radius needs a square matrix");
  SpectralReport report;
  if (a.rows() == 0 || nilpotent(a)) {
    report.classification = SpectrumClass::Zero;
    return report;
  }
  const auto components = detail::tarjan_scc(matrix_adjacency(a));
  for (const auto& comp : components) {
    IntMatrix block(static_cast<int>(comp.size()), static_cast<int>(comp.size()));
    for (size_t i = 0; i < comp.size(); ++i)
      for (size_t j = 0; j < comp.size(); ++j)
        block(static_cast<int>(i), static_cast<int>(j)) = a(comp[i], comp[j]);
    const BlockResult result = irreducible_block_radius(block);
    report.iterations += result.iterations;
    if (result.rho > report.rho) {
      report.rho = result.rho;
      report.residual = result.residual;
    }
  }
  report.classification = band_of(report.rho);
  return report;
}

SpectrumClass classify_graph_spectrum(const DirectedGraph& g) {
  const IntMatrix a = vertex_matrix(g);
  if (nilpotent(a)) return SpectrumClass::Zero;
  bool permutation = true;
  for (int v = 0; v < g.vertex_count() && permutation; ++v)
    permutation = g.edges_into(v).size() == 1 && g.edges_out_of(v).size() == 1;
  if (permutation) return SpectrumClass::One;
  if (strongly_connected(g)) return SpectrumClass::GreaterThanOne;
  return SpectrumClass::AtLeastOne;
}

PerronVector perron_vector(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InternalError("Perron vector needs a square matrix");
  if (!matrix_irreducible(a))
    throw AdmissibilityError("Perron vector needs an irreducible matrix");
  const int n = a.rows();
  PerronVector out;
  if (n == 1) {
    out.x = {1.0};
    out.rho = static_cast<double>(a(0, 0));
    return out;
  }
  const Matrix m = Matrix::from(a);
  std::vector<double> x(n, 1.0 / n);
  double rho = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= tol::max_power_iterations; ++it) {
    std::vector<double> z = m.apply(x);
    for (int i = 0; i < n; ++i) z[i] += x[i];
    double sum = 0.0;
    for (double v : z) sum += v;
    for (int i = 0; i < n; ++i) x[i] = z[i] / sum;
    out.iterations = it;
    const std::vector<double> ax = m.apply(x);
    double dot = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
      dot += x[i] * ax[i];
      norm += x[i] * x[i];
    }
    rho = dot / norm;
    residual = 0.0;
    for (int i = 0; i < n; ++i) residual = std::max(residual, std::fabs(ax[i] - rho * x[i]));
    if (residual <= 1e-12) break;
  }
  if (residual > tol::eigen_residual)
    throw InternalError("power iteration failed to reach the eigen residual tolerance");
  out.x = std::move(x);
  out.rho = rho;
  out.residual = residual;
  return out;
}

SubinvarianceCheck check_subinvariant(const IntMatrix& a, std::span<const double> m, double q,
                                      double tolerance) {
  if (a.rows() != a.cols() || static_cast<int>(m.size()) != a.rows())
    throw InternalError("subinvariance check shape mismatch");
  SubinvarianceCheck out;
  out.slack.resize(m.size());
  out.ok = true;
  for (int i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += static_cast<double>(a(i, j)) * m[j];
    out.slack[i] = m[i] - q * acc;
    if (out.slack[i] < -tolerance) out.ok = false;
  }
  return out;
}

}  // namespace kmsgraph
