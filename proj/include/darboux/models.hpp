#pragma once

#include <cstddef>
#include <vector>

#include "darboux/darboux_diff.hpp"
#include "darboux/field.hpp"
#include "darboux/gse.hpp"

/// Two fully worked example problems with closed-form transformed
/// potentials, used as independent oracles for the generic machinery and as
/// the curve/spectrum builders behind the command-line presets. Both reduce
/// to constant-coefficient problems under a change of variables, so every
/// n-step potential is a logarithmic curvature of a small hyperbolic
/// polynomial — evaluated here analytically, never by finite differences.
namespace darboux::models {

// ---------------------------------------------------------------------------
// Radial-type example: m = 1/x, q = x, v = 1/(4x) on x > 0.
// phi = psi/sqrt(x) turns the problem into -psi'' = E psi, so hyperbolic
// rays cosh/sinh(kappa x)/(kappa sqrt x) solve it at E = -kappa^2 and
// trigonometric rays sin/cos(k x)/(k sqrt x) at E = +k^2, and the n-step
// potentials are v_n = 1/(4x) - 2x (ln W_n)'' with W_n the Wronskian of the
// hyperbolic numerators.
// ---------------------------------------------------------------------------

/// The base problem, all coefficient jets analytic.
BackgroundPtr radial_background(const GridPtr& g);

/// Hyperbolic ray at E = -kappa^2 (even: cosh, odd: sinh), full jet.
ScalarField radial_ray(const GridPtr& g, double kappa, bool even);

/// Trigonometric ray at E = +k^2 (sine or cosine numerator), full jet.
ScalarField radial_trig_ray(const GridPtr& g, double k, bool sine);

/// Validated transformation function at E = -kappa^2. The tolerance gates
/// the honest value-level finite-difference residual, which is dominated by
/// the 1/sqrt(x) edge on grids that start near zero — the default covers
/// that noise; the derivative rows the ray carries are exact regardless.
Seed radial_seed(const BackgroundPtr& bg, double kappa, bool even,
                 double tol = 10.0);

/// One-step potential: 1/(4x) - 2 x kappa^2 sech^2(kappa x).
ScalarField radial_v1(const GridPtr& g, double kappa);

/// Image ray of the E = +k^2 sine ray under the one-step map at kappa:
///   -cos(kx)/sqrt(x) + kappa tanh(kappa x) sin(kx)/(k sqrt x).
ScalarField radial_phi1(const GridPtr& g, double kappa, double k);

/// Two- and three-step potentials for strictly increasing kappas. The seed
/// parities run cosh, sinh, sinh, which keeps the Wronskians strictly
/// positive on x > 0 (they vanish only at x = 0, outside any grid).
ScalarField radial_v2(const GridPtr& g, double kappa1, double kappa2);
ScalarField radial_v3(const GridPtr& g, double kappa1, double kappa2,
                      double kappa3);

/// One-parameter deformation of radial_v1, built on its normalized bound
/// state: v1 - 2x (d^2/dx^2) ln(1 + Gamma (tanh kappa x - tanh kappa x0)).
/// Gamma below -1/(tanh kappa b - tanh kappa x0) (b the right endpoint)
/// drags the logarithm's argument through zero -> SingularDenominatorError.
ScalarField radial_family_v(const GridPtr& g, double kappa, double Gamma,
                            double x0);

/// The deformation's transformation function on the radial_v1 problem:
/// sqrt(kappa/x) sech(kappa x), the bound state normalized to unit weighted
/// norm on (0, infinity). Full jet (built by field arithmetic on exact jets).
ScalarField radial_family_seed_fn(const GridPtr& g, double kappa);

// ---------------------------------------------------------------------------
// Power-law-mass example: m = alpha^2/x^2, q = 1, v = 0 on x > 0.
// t = ln x and phi = psi(t)/sqrt(x) turn the problem into
// -psi''(t)/alpha^2 + psi/(4 alpha^2) = E psi, so log-hyperbolic rays
// cosh/sinh(mu ln x)/sqrt(x) solve it at E = -(mu^2 - 1/4)/alpha^2 and
// v_n = -(2/alpha^2) (d^2/dt^2) ln W_n with W_n the Wronskian in t.
// ---------------------------------------------------------------------------

/// The base problem for mass parameter alpha > 0, coefficient jets analytic.
BackgroundPtr powermass_background(const GridPtr& g, double alpha);

/// The log-frequency realizing a designed level E < 0:
/// mu = sqrt(alpha^2 |E| + 1/4).
double powermass_mu(double alpha, double E);

/// Log-hyperbolic ray at E = -(mu^2 - 1/4)/alpha^2 (even: cosh, odd: sinh),
/// full jet. The odd ray vanishes at x = 1; that is fine for chain use,
/// where only the intermediate transformation functions must be nodeless.
ScalarField powermass_ray(const GridPtr& g, double mu, bool even);

/// Validated transformation function at the designed level E < 0. Same
/// honest-residual tolerance remark as radial_seed: grids reaching far into
/// the x^-mu edge measure O(1) value-level noise on exact samples.
Seed powermass_seed(const BackgroundPtr& bg, double alpha, double E,
                    bool even, double tol = 10.0);

/// One-step potential for the designed level E1 < 0:
///   -(2 mu1^2 / alpha^2) sech^2(mu1 ln x).
ScalarField powermass_v1(const GridPtr& g, double alpha, double E1);

/// Two- and three-step potentials for strictly deepening designed levels
/// (E1 > E2 > E3, all negative). Seed parities run cosh, sinh, cosh; the
/// resulting Wronskians are strictly positive for all t, so the potentials
/// are regular on the whole half line (a sinh-last pattern would instead
/// vanish at x = 1, inside every preset grid).
ScalarField powermass_v2(const GridPtr& g, double alpha, double E1,
                         double E2);
ScalarField powermass_v3(const GridPtr& g, double alpha, double E1,
                         double E2, double E3);

/// One-parameter deformation of powermass_v1 built on the bound state
/// scaled to sqrt(alpha) sech(mu1 ln x)/sqrt(x):
///   v1 - (2/alpha^2)(d^2/dt^2) ln(1 + (Gamma alpha/mu1)(tanh mu1 t
///        - tanh mu1 t0)),  t = ln x, t0 = ln x0.
ScalarField powermass_family_v(const GridPtr& g, double alpha, double E1,
                               double Gamma, double x0);

/// The deformation's transformation function on the powermass_v1 problem:
/// sqrt(alpha) sech(mu1 ln x)/sqrt(x). Full jet.
ScalarField powermass_family_seed_fn(const GridPtr& g, double alpha,
                                     double E1);

// ---------------------------------------------------------------------------
// Shape analysis used by the preset verifier.
// ---------------------------------------------------------------------------

/// Indices of strict local minima of the sampled values, ignoring `margin`
/// nodes at each end.
std::vector<std::size_t> local_minima(const ScalarField& v,
                                      std::size_t margin = 2);

}  // namespace darboux::models
