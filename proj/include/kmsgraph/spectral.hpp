#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "kmsgraph/graph.hpp"
#include "kmsgraph/linalg.hpp"
#include "kmsgraph/tolerances.hpp"

namespace kmsgraph {

/// What a spectral radius value says about the graph.  Zero and One pin the
/// value exactly; GreaterThanOne and AtLeastOne are one-sided.
enum class SpectrumClass { Zero, One, AtLeastOne, GreaterThanOne };

std::string_view to_string(SpectrumClass c);

struct SpectralReport {
  double rho = 0.0;
  SpectrumClass classification = SpectrumClass::Zero;  // numeric banding of rho
  int iterations = 0;
  double residual = 0.0;  // ||A x - rho x||_inf on the dominant block iterate
};

/// Spectral radius of a nonnegative integer matrix.  The spectrum of a
/// block triangular matrix is the union over the diagonal blocks, so the
/// radius is the maximum over the strongly connected blocks; each block B
/// is handled by power iteration on B + I, which is primitive and therefore
/// converges geometrically (plain iteration on a reducible matrix can stall
/// at a defective dominant eigenvalue).  Nilpotent matrices are detected
/// exactly.
SpectralReport spectral_radius(const IntMatrix& a);

/// Structural classification with no floating point: acyclic graphs have
/// radius zero; graphs whose vertices all have one incoming and one
/// outgoing edge are unions of disjoint cycles with radius one; strongly
/// connected graphs that are not a single cycle lie strictly above one;
/// any other graph with a cycle is only known to be at least one.
SpectrumClass classify_graph_spectrum(const DirectedGraph& g);

struct PerronVector {
  std::vector<double> x;  // positive, sums to one
  double rho = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Positive eigenvector of an irreducible nonnegative matrix, normalized to
/// sum one.  Throws AdmissibilityError on reducible input.
PerronVector perron_vector(const IntMatrix& a);

struct SubinvarianceCheck {
  bool ok = false;
  std::vector<double> slack;  // m - q A m
};

/// Entrywise test of q A m <= m with the given slack tolerance.
SubinvarianceCheck check_subinvariant(const IntMatrix& a, std::span<const double> m, double q,
                                      double tolerance = tol::subinvariance_slack);

}  // namespace kmsgraph
