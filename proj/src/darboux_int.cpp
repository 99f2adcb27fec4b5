#include "darboux/darboux_int.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::string base_label(const Background& bg) {
  return bg.label.empty() ? std::string("background") : bg.label;
}

double default_eps(double constant) {
  return 1e-10 * (1.0 + std::abs(constant));
}

/// Trapezoid cumulative integral with the Euler-Maclaurin endpoint
/// correction,
///   F_i = T_i - h^2/12 (f'_i - f'_{i0}),
/// which upgrades the trapezoid's O(h^2) to O(h^4) for smooth integrands.
/// The correction uses carried derivative rows when present; the
/// finite-difference fallback still lands at O(h^4) because the correction
/// term is itself O(h^2). Without this, quadrature error would dominate the
/// 1e-6 cross-form comparisons against the jet-accurate Wronskian route.
ScalarField cumulative_o4(const ScalarField& f, double x0) {
  const ScalarField T = integrate_cumulative(f, x0);
  const ScalarField f1 = derive(f, 1);
  const std::size_t i0 = nearest_node(f.grid(), x0);
  const double c = f.grid().h * f.grid().h / 12.0;
  std::vector<double> F(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    F[i] = T[i] - c * (f1[i] - f1[i0]);
  std::vector<std::vector<double>> rows;
  for (int k = 1; k <= T.depth(); ++k) rows.push_back(T.derivative_row(k));
  return ScalarField(f.grid_ptr(), std::move(F), std::move(rows));
}

/// integral_{x0}^{x} q u1 u2 dx' -- the one cumulative expression every
/// kernel denominator is built from, so that routes which are algebraically
/// identical also round identically.
ScalarField pair_integral(const Background& bg, const ScalarField& u1,
                          const ScalarField& u2, double x0) {
  return cumulative_o4(bg.q * (u1 * u2), x0);
}

/// Guarantee a first-derivative row so the equation re-extension can run;
/// fields without carried rows get a finite-difference row.
ScalarField ensure_row1(const ScalarField& f) {
  if (f.depth() >= 1) return f;
  return ScalarField(f.grid_ptr(), f.values(), {derive(f, 1).values()});
}

void require_background(const BackgroundPtr& bg, const char* who) {
  if (!bg) throw ArgumentError(std::string(who) + ": background is null");
}

void require_seed_grid(const BackgroundPtr& bg, const Seed& seed,
                       const char* who) {
  if (!same_grid(seed.solution.phi.grid(), bg->grid()))
    throw ArgumentError(std::string(who) +
                        ": seed lives on a different grid than the background");
}

void require_base_inside(const Background& bg, double x0, const char* who) {
  const double lo = bg.grid().x.front();
  const double hi = bg.grid().x.back();
  if (!(x0 >= lo && x0 <= hi)) {
    std::ostringstream os;
    os << who << ": integration base x0=" << fmt(x0)
       << " lies outside the grid [" << fmt(lo) << ", " << fmt(hi) << "]";
    throw ArgumentError(os.str());
  }
}

/// Background deformed by a kernel's diagonal:
///   v2 = v - 2 sqrt(q/m) d/dx[ (left right / denom) / sqrt(qm) ].
/// Every integral route funnels through this one expression, so routes that
/// agree algebraically agree bit for bit.
BackgroundPtr kernel_background(const Kernel& kernel, const BackgroundPtr& bg,
                                std::string label) {
  const ScalarField diag = kernel.left * kernel.right / kernel.denom;
  const ScalarField inner = diag / sqrt_field(bg->q * bg->m);
  ScalarField v2 = bg->v - 2.0 * (sqrt_field(bg->q / bg->m) * derive(inner, 1));
  return make_background(bg->m, bg->q, std::move(v2), std::move(label),
                         bg->warnings);
}

Solution attach(const BackgroundPtr& bg, const ScalarField& raw, double energy,
                SolutionRole role) {
  const ScalarField ext = equation_jet(*bg, ensure_row1(raw), energy);
  Solution out;
  out.phi = ext;
  out.energy = energy;
  out.role = role;
  out.residual = equation_residual(*bg, ext.values_only(), energy);
  out.background = bg;
  return out;
}

}  // namespace

Kernel make_kernel(ScalarField left, ScalarField right, ScalarField denom,
                   double constant, double x0, double eps) {
  if (!same_grid(left.grid(), right.grid()) ||
      !same_grid(left.grid(), denom.grid()))
    throw ArgumentError("make_kernel: kernel fields live on different grids");
  if (eps <= 0.0) eps = default_eps(constant);
  for (std::size_t i = 0; i < denom.size(); ++i) {
    if (!(denom[i] >= eps)) {
      std::ostringstream os;
      os << "make_kernel: kernel denominator drops to " << fmt(denom[i])
         << " at node " << i << " (x=" << fmt(denom.grid().x[i])
         << "), below the positivity guard " << fmt(eps)
         << "; the transformed potential would be singular there";
      throw SingularDenominatorError(os.str());
    }
  }
  Kernel k;
  k.left = std::move(left);
  k.right = std::move(right);
  k.denom = std::move(denom);
  k.constant = constant;
  k.x0 = x0;
  return k;
}

Kernel two_state_kernel(const BackgroundPtr& bg, const Seed& seed1,
                        const Seed& seed2, double c1, double x0) {
  require_background(bg, "two_state_kernel");
  require_seed_grid(bg, seed1, "two_state_kernel");
  require_seed_grid(bg, seed2, "two_state_kernel");
  require_base_inside(*bg, x0, "two_state_kernel");
  const ScalarField& u1 = seed1.solution.phi;
  const ScalarField& u2 = seed2.solution.phi;
  return make_kernel(u2, bg->q * u1, c1 + pair_integral(*bg, u1, u2, x0), c1,
                     x0);
}

Kernel one_state_kernel(const BackgroundPtr& bg, const Seed& seed1,
                        double gamma, double x0) {
  require_background(bg, "one_state_kernel");
  require_seed_grid(bg, seed1, "one_state_kernel");
  require_base_inside(*bg, x0, "one_state_kernel");
  const ScalarField& u1 = seed1.solution.phi;
  return make_kernel(gamma * u1, bg->q * u1,
                     1.0 + gamma * pair_integral(*bg, u1, u1, x0), gamma, x0);
}

Solution phi1_integral(const BackgroundPtr& bg, const Seed& seed1,
                       const Solution& phi, double C, double x0) {
  require_background(bg, "phi1_integral");
  require_seed_grid(bg, seed1, "phi1_integral");
  if (!same_grid(phi.phi.grid(), bg->grid()))
    throw ArgumentError(
        "phi1_integral: solution lives on a different grid than the "
        "background");
  require_base_inside(*bg, x0, "phi1_integral");
  if (!seed1.nodeless)
    throw NodalSeedError(
        "phi1_integral: the first-order integral form divides by the "
        "transformation function; this one vanishes or changes sign on the "
        "grid");
  const BackgroundPtr target = transformed_potential(bg, seed1);
  const ScalarField& u1 = seed1.solution.phi;
  const ScalarField integral = cumulative_o4(bg->q * (u1 * phi.phi), x0);
  const ScalarField raw =
      sqrt_field(bg->m / bg->q) *
      (C + (seed1.lambda - phi.energy) * integral) / u1;
  return attach(target, raw, phi.energy, SolutionRole::generic);
}

std::pair<BackgroundPtr, Solution> order2_integral_transform(
    const BackgroundPtr& bg, const Seed& seed1, const Seed& seed2,
    const Solution& phi, double C, double c1, double x0) {
  require_background(bg, "order2_integral_transform");
  if (!same_grid(phi.phi.grid(), bg->grid()))
    throw ArgumentError(
        "order2_integral_transform: solution lives on a different grid than "
        "the background");
  const Kernel kernel = two_state_kernel(bg, seed1, seed2, c1, x0);
  std::string label = base_label(*bg) + " / pair(" + fmt(seed1.lambda) + ", " +
                      fmt(seed2.lambda) + "; x0=" + fmt(x0) + ")";
  const BackgroundPtr bg2 = kernel_background(kernel, bg, std::move(label));
  const ScalarField& u1 = seed1.solution.phi;
  const double shift = seed1.lambda - phi.energy;
  const ScalarField integral = cumulative_o4(bg->q * (u1 * phi.phi), x0);
  const ScalarField raw =
      shift * phi.phi - (kernel.left * (C + shift * integral)) / kernel.denom;
  return {bg2, attach(bg2, raw, phi.energy, SolutionRole::generic)};
}

std::pair<BackgroundPtr, ScalarField> kernel_apply(const Kernel& kernel,
                                                   const BackgroundPtr& bg,
                                                   const ScalarField& phi) {
  require_background(bg, "kernel_apply");
  if (!same_grid(kernel.left.grid(), bg->grid()))
    throw ArgumentError(
        "kernel_apply: kernel lives on a different grid than the background");
  if (!same_grid(phi.grid(), bg->grid()))
    throw ArgumentError(
        "kernel_apply: field lives on a different grid than the background");
  // aggregate-constructed kernels bypass make_kernel, so re-check cheaply
  const double eps = default_eps(kernel.constant);
  for (std::size_t i = 0; i < kernel.denom.size(); ++i)
    if (!(kernel.denom[i] >= eps)) {
      std::ostringstream os;
      os << "kernel_apply: kernel denominator drops to "
         << fmt(kernel.denom[i]) << " at node " << i
         << " (x=" << fmt(kernel.denom.grid().x[i])
         << "), below the positivity guard " << fmt(eps);
      throw SingularDenominatorError(os.str());
    }
  std::string label = base_label(*bg) + " / kernel(c=" + fmt(kernel.constant) +
                      ", x0=" + fmt(kernel.x0) + ")";
  BackgroundPtr bg2 = kernel_background(kernel, bg, std::move(label));
  const ScalarField integral = cumulative_o4(kernel.right * phi, kernel.x0);
  ScalarField phi2 = phi - (kernel.left * integral) / kernel.denom;
  return {std::move(bg2), std::move(phi2)};
}

Solution IsospectralFamily::map(const Solution& phi, double C) const {
  if (!background)
    throw ArgumentError("IsospectralFamily::map: family not initialized");
  if (!same_grid(phi.phi.grid(), background->grid()))
    throw ArgumentError(
        "IsospectralFamily::map: solution lives on a different grid than the "
        "family");
  const double shift = lambda1 - phi.energy;
  const ScalarField integral = cumulative_o4(weight * phi.phi, x0);
  const ScalarField raw =
      shift * phi.phi -
      ((gamma * seed_fn) * (C + shift * integral)) / denom;
  return attach(background, raw, phi.energy, SolutionRole::generic);
}

IsospectralFamily isospectral_family(const BackgroundPtr& bg,
                                     const Seed& seed1, double gamma,
                                     double x0) {
  require_background(bg, "isospectral_family");
  require_seed_grid(bg, seed1, "isospectral_family");
  require_base_inside(*bg, x0, "isospectral_family");
  const Kernel kernel = one_state_kernel(bg, seed1, gamma, x0);
  std::string label = base_label(*bg) + " / family(" + fmt(seed1.lambda) +
                      ", Gamma=" + fmt(gamma) + ", x0=" + fmt(x0) + ")";
  IsospectralFamily fam;
  fam.background = kernel_background(kernel, bg, std::move(label));
  fam.gamma = gamma;
  fam.lambda1 = seed1.lambda;
  fam.x0 = x0;
  fam.seed_fn = seed1.solution.phi;
  fam.weight = kernel.right;
  fam.denom = kernel.denom;
  const ScalarField eta2 = -(kernel.left / kernel.denom);
  fam.bound_state =
      attach(fam.background, eta2, seed1.lambda, SolutionRole::bound);
  return fam;
}

OneStateChain isospectral_one_state_chain(const BackgroundPtr& bg,
                                          const Seed& seed1, double c1,
                                          double x0) {
  require_background(bg, "isospectral_one_state_chain");
  require_seed_grid(bg, seed1, "isospectral_one_state_chain");
  require_base_inside(*bg, x0, "isospectral_one_state_chain");
  // the degenerate pair: both kernel slots hold the same seed, which the
  // differential chain rejects but the integral form handles regularly
  const Kernel kernel = two_state_kernel(bg, seed1, seed1, c1, x0);
  std::string label = base_label(*bg) + " / double-step(" + fmt(seed1.lambda) +
                      ", c1=" + fmt(c1) + ", x0=" + fmt(x0) + ")";
  OneStateChain out;
  out.background = kernel_background(kernel, bg, std::move(label));
  // K = -(ln sqrt(m/q))' - q U1^2 / denom: finite at zeros of U1, unlike the
  // first-order superpotential -U1'/U1
  const ScalarField w = sqrt_field(bg->m / bg->q);
  out.superpotential =
      -(derive(w, 1) / w) - (kernel.left * kernel.right) / kernel.denom;
  return out;
}

double matched_c1(const BackgroundPtr& bg, const Seed& seed1,
                  const Seed& seed2, double x0) {
  require_background(bg, "matched_c1");
  require_seed_grid(bg, seed1, "matched_c1");
  require_seed_grid(bg, seed2, "matched_c1");
  require_base_inside(*bg, x0, "matched_c1");
  const double dl = seed1.lambda - seed2.lambda;
  if (std::abs(dl) <= 1e-12 * (1.0 + std::max(std::abs(seed1.lambda),
                                              std::abs(seed2.lambda))))
    throw ArgumentError(
        "matched_c1: the Wronskian constant divides by (lambda1 - lambda2); "
        "equal transformation energies have no matched constant");
  const std::size_t i = nearest_node(bg->grid(), x0);
  const ScalarField w = wronskian(seed1.solution.phi, seed2.solution.phi);
  return w[i] / (bg->m[i] * dl);
}

double matched_C(const BackgroundPtr& bg, const Seed& seed1,
                 const Solution& phi, double x0) {
  require_background(bg, "matched_C");
  require_seed_grid(bg, seed1, "matched_C");
  if (!same_grid(phi.phi.grid(), bg->grid()))
    throw ArgumentError(
        "matched_C: solution lives on a different grid than the background");
  require_base_inside(*bg, x0, "matched_C");
  const std::size_t i = nearest_node(bg->grid(), x0);
  const ScalarField w = wronskian(seed1.solution.phi, phi.phi);
  return w[i] / bg->m[i];
}

}  // namespace darboux
