#pragma once

namespace kmsgraph::tol {

/// Maximum residual of an accepted eigenpair, ||A x - rho x||_inf.
inline constexpr double eigen_residual = 1e-10;

/// Half width of the bands used to compare a computed spectral radius
/// against the structural classification (rho < band, |rho - 1| < band,
/// rho > 1 + band).
inline constexpr double classification_band = 1e-8;

/// Admissibility guard: q * rho(A) must stay below 1 by this margin.
inline constexpr double admissibility_margin = 1e-9;

/// A boundary weight entry at or below this value counts as zero when
/// deciding whether a state kills the Cuntz-Krieger defect projections.
inline constexpr double epsilon_support = 1e-9;

/// Accepted deviation of eps . y from 1 for simplex membership.
inline constexpr double simplex_membership = 1e-9;

/// Accepted deviation of a probability vector sum from 1.
inline constexpr double probability_sum = 1e-9;

/// Entrywise slack allowed when testing subinvariance A m <= (1/q) m.
inline constexpr double subinvariance_slack = 1e-9;

/// Power iteration stops once successive Rayleigh quotients differ by
/// less than this.
inline constexpr double rayleigh_stop = 1e-13;

/// Iteration cap for the power method.
inline constexpr int max_power_iterations = 100000;

/// Default target for the truncated representation tail mass.
inline constexpr double oracle_tail = 1e-8;

}  // namespace kmsgraph::tol
