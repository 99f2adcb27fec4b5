#pragma once

#include <memory>
#include <string>
#include <vector>

#include "darboux/field.hpp"

namespace darboux {

/// Coefficient triple of the generalized Schrödinger equation
///   -(d/dx)[(1/m) phi'] + v phi = q E phi
/// with strictly positive mass m and energy weight q sharing one grid.
struct Background {
  ScalarField m;  ///< effective mass, > 0 everywhere
  ScalarField q;  ///< energy weight, > 0 everywhere
  ScalarField v;  ///< potential
  std::string label;
  std::vector<std::string> warnings;  ///< non-fatal notes attached at construction

  const Grid& grid() const { return m.grid(); }
  const GridPtr& grid_ptr() const { return m.grid_ptr(); }
};

using BackgroundPtr = std::shared_ptr<const Background>;

/// Validate and freeze a background. Throws ArgumentError when the fields
/// disagree on grids or when m or q fails strict positivity.
BackgroundPtr make_background(ScalarField m, ScalarField q, ScalarField v,
                              std::string label = {},
                              std::vector<std::string> warnings = {});

/// What a Solution is used for downstream.
enum class SolutionRole { generic, seed, eta, eta_hat, liouville, bound };

/// A function phi with its energy, attached to the background it solves.
/// `residual` is the measured equation residual of the sampled values
/// (finite-difference path), recorded at construction — stored, never
/// assumed.
struct Solution {
  ScalarField phi;
  double energy = 0.0;
  SolutionRole role = SolutionRole::generic;
  double residual = 0.0;
  BackgroundPtr background;
};

/// Lowest part of a Dirichlet-box spectrum.
struct Spectrum {
  std::vector<double> eigenvalues;           ///< strictly ascending
  std::vector<ScalarField> eigenfunctions;   ///< q-normalized, zero at both ends
  std::size_t n = 0;                         ///< grid node count
  double h = 0.0;                            ///< grid spacing
  std::string bc = "dirichlet";
};

/// Integrate the equation as an initial-value problem: fixed-step RK4 on the
/// first-order system phi' = m p, p' = (v - q E) phi, both directions from
/// the grid node nearest x_start, with initial data (phi0, p0) there.
/// Midpoint coefficient values come from symmetric Taylor evaluation when the
/// background carries derivative rows (depth >= 2) and from four-point cubic
/// interpolation otherwise, so the scheme stays fourth-order either way.
/// The returned phi carries equation-consistent derivative rows to depth 3;
/// the recorded residual is measured on the bare values. Throws ArgumentError
/// for (0,0) initial data, IntegrationOverflowError (naming the last valid
/// node) when the solution blows past representable range.
Solution integrate_solution(const BackgroundPtr& bg, double E, double phi0,
                            double p0, double x_start,
                            SolutionRole role = SolutionRole::generic);

/// Re-derive derivative rows 2 and 3 of phi from the equation itself:
///   phi'' = (m'/m) phi' + m (v - q E) phi,
/// differentiated once more for row 3. phi must carry at least row 1. The
/// result is exact mathematics whenever phi solves the background at E, so
/// chains may re-extend intermediate functions without losing analyticity.
ScalarField equation_jet(const Background& bg, const ScalarField& phi,
                         double E);

/// Second linearly independent solution at the same energy,
///   U_hat = U * integral_{x0}^{x} m / U^2,
/// valid while U has no node on the grid (otherwise NodalSeedError). The
/// construction forces wronskian(U, U_hat) = m.
Solution second_solution_liouville(const BackgroundPtr& bg, const Solution& U,
                                   double x0);

/// Lowest k Dirichlet eigenpairs of the discretized generalized eigenproblem
/// A phi = E Q phi on the interior nodes:
///   (A phi)_i = [-(phi_{i+1}-phi_i)/m_{i+1/2} + (phi_i-phi_{i-1})/m_{i-1/2}]/h^2
///               + v_i phi_i,          Q = diag(q_i),
/// symmetrized by Q^{-1/2}, eigenvalues by Sturm-sequence bisection to width
/// 1e-10 * max(1, |E|), eigenfunctions by inverse iteration, mapped back and
/// q-normalized with the first significant interior value positive.
Spectrum spectrum_fd(const BackgroundPtr& bg, std::size_t k);

/// Weighted norm integral of |phi|^2 with weight q over the whole grid:
/// composite Simpson when the interval count allows it, trapezoid otherwise.
double weighted_norm(const Background& bg, const ScalarField& phi);

/// Max over interior nodes (excluding 2 per side) of
///   |-(d/dx)[(1/m) phi'] + v phi - q E phi| / (1 + max |q E phi|),
/// derivatives via derive() (carried rows when present, finite differences
/// otherwise). Pass phi.values_only() to force an honest finite-difference
/// measurement for functions whose rows were themselves built from the
/// equation.
double equation_residual(const Background& bg, const ScalarField& phi,
                         double E);

}  // namespace darboux
