#pragma once

#include <utility>

#include "darboux/darboux_diff.hpp"
#include "darboux/gse.hpp"

namespace darboux {

/// Separable transformation kernel
///   K(x, x') = left(x) * right(x') / denom(x)
/// with denom the cumulative integral of left's and right's product shifted
/// by a constant. `right` is q * U1; `left` is U2 for a two-state pair or
/// Gamma * U1 for the one-state family, so the diagonal K(x, x) is the field
/// that deforms the potential. The housed constant (c1 or Gamma) and the
/// integration base are recorded for reproducibility.
///
/// Build kernels through make_kernel / two_state_kernel / one_state_kernel:
/// they enforce the positivity invariant denom >= eps at every node.
struct Kernel {
  ScalarField left;
  ScalarField right;
  ScalarField denom;
  double constant = 0.0;
  double x0 = 0.0;
};

/// Validate and assemble a kernel. All three fields must share one grid and
/// denom must stay >= eps at every node; eps <= 0 selects the default guard
/// 1e-10 * (1 + |constant|). Violations raise SingularDenominatorError
/// naming the first offending node, or ArgumentError for grid mismatches.
Kernel make_kernel(ScalarField left, ScalarField right, ScalarField denom,
                   double constant, double x0, double eps = -1.0);

/// Two-state kernel: left = U2, right = q U1,
/// denom(x) = c1 + integral_{x0}^{x} q U1 U2 dx'.
Kernel two_state_kernel(const BackgroundPtr& bg, const Seed& seed1,
                        const Seed& seed2, double c1, double x0);

/// One-state family kernel: left = Gamma * U1, right = q U1,
/// denom(x) = 1 + Gamma * integral_{x0}^{x} q U1^2 dx'.
Kernel one_state_kernel(const BackgroundPtr& bg, const Seed& seed1,
                        double gamma, double x0);

/// First-order transformed solution in integral form,
///   phi1 = sqrt(m/q) (1/U1) [ C + (lambda1 - E) integral_{x0}^{x} q U1 phi ],
/// the quadrature counterpart of applying the first-order operator: with
/// C = matched_C(bg, seed1, phi, x0) the two agree pointwise. The result is
/// attached to the step's transformed background. U1 must be nodeless here
/// (NodalSeedError otherwise) because it divides the whole expression.
Solution phi1_integral(const BackgroundPtr& bg, const Seed& seed1,
                       const Solution& phi, double C, double x0);

/// Second-order transformation in integral form:
///   v2   = v - 2 sqrt(q/m) d/dx[ (1/sqrt(qm)) q U2 U1 / denom ],
///   phi2 = (lambda1 - E) phi - U2 [C + (lambda1 - E) int q U1 phi] / denom,
///   denom = c1 + integral_{x0}^{x} q U1 U2 dx'.
/// Equal transformation energies are allowed: with seed2 = seed1 the
/// formulas stay regular and reproduce the one-state results bit for bit --
/// exactly the degenerate pair the differential chain rejects. The
/// denominator must stay positive on the whole grid
/// (SingularDenominatorError otherwise, naming the crossing node).
std::pair<BackgroundPtr, Solution> order2_integral_transform(
    const BackgroundPtr& bg, const Seed& seed1, const Seed& seed2,
    const Solution& phi, double C, double c1, double x0);

/// Apply a kernel directly:
///   v2(x)   = v - 2 sqrt(q/m) d/dx[ K(x,x) / sqrt(qm) ],
///   phi2(x) = phi(x) - integral_{x0}^{x} K(x, x') phi(x') dx'
///           = phi - left * (integral_{x0}^{x} right * phi) / denom.
/// The returned field is a raw ray: it lacks the (lambda1 - E) prefactor the
/// second-order map carries, so compare against other routes as rays.
std::pair<BackgroundPtr, ScalarField> kernel_apply(const Kernel& kernel,
                                                   const BackgroundPtr& bg,
                                                   const ScalarField& phi);

/// One-parameter family of backgrounds sharing every spectral property of
/// the base except the normalization of the level at lambda1. Gamma = 0 is
/// the base itself; the family's bound state at lambda1 is
///   eta2 = -Gamma U1 / (1 + Gamma integral q U1^2),
/// identically zero at Gamma = 0.
struct IsospectralFamily {
  BackgroundPtr background;
  Solution bound_state;  ///< eta2 at lambda1 (zero field when gamma == 0)
  double gamma = 0.0;
  double lambda1 = 0.0;
  double x0 = 0.0;

  /// Map a solution phi of the base at energy E to the family member:
  ///   phi2 = (lambda1-E) phi - Gamma U1 [C + (lambda1-E) int q U1 phi]/denom.
  /// C must be the Wronskian matching constant of phi (matched_C on the base
  /// problem) for phi2 to solve the member equation at E: changing C shifts
  /// the image by a multiple of the bound state, which lives at lambda1, so
  /// only at E = lambda1 — where the image is C * eta2 outright — is C free.
  Solution map(const Solution& phi, double C) const;

  // kernel pieces the mapper reuses; treated as read-only by callers
  ScalarField seed_fn;  ///< U1
  ScalarField weight;   ///< q U1 (the integrand factor)
  ScalarField denom;    ///< 1 + Gamma * integral q U1^2
};

/// Build the family member at one Gamma. The denominator 1 + Gamma int q U1^2
/// is automatically positive for Gamma >= 0 and is checked for Gamma < 0
/// (SingularDenominatorError on a crossing).
IsospectralFamily isospectral_family(const BackgroundPtr& bg,
                                     const Seed& seed1, double gamma,
                                     double x0);

/// The same double transformation written through the accumulated
/// superpotential of its two differential steps,
///   K(x) = -d/dx ln sqrt(m/q) - q U1^2 / (c1 + integral q U1^2),
/// which stays finite at zeros of U1 -- the first-order route does not. The
/// background equals isospectral_family at Gamma = 1/c1 up to rounding.
struct OneStateChain {
  BackgroundPtr background;
  ScalarField superpotential;
};
OneStateChain isospectral_one_state_chain(const BackgroundPtr& bg,
                                          const Seed& seed1, double c1,
                                          double x0);

/// Integration constants that make the integral forms coincide pointwise
/// with the Wronskian (differential) forms, evaluated at the node nearest
/// x0: c1 = W(U1,U2)(x0) / (m(x0) (lambda1 - lambda2)) -- the seeds must
/// have distinct energies -- and C = W(U1, phi)(x0) / m(x0).
double matched_c1(const BackgroundPtr& bg, const Seed& seed1,
                  const Seed& seed2, double x0);
double matched_C(const BackgroundPtr& bg, const Seed& seed1,
                 const Solution& phi, double x0);

}  // namespace darboux
