#include "darboux/darboux_diff.hpp"

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

bool values_nodeless(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) return false;
    if (i + 1 < v.size() && v[i + 1] != 0.0 &&
        std::signbit(v[i]) != std::signbit(v[i + 1]))
      return false;
  }
  return true;
}

ScalarField log_derivative(const ScalarField& s) { return derive(s, 1) / s; }

/// sqrt(q/m) (d/dx)[(1/q)(d/dx) sqrt(q/m)]: the seed-independent part of the
/// potential shift, contributed once per transformation step.
ScalarField coefficient_shift(const Background& bg) {
  const ScalarField r = sqrt_field(bg.q / bg.m);
  return r * derive((1.0 / bg.q) * derive(r, 1), 1);
}

/// Unified transformed potential. `seed_fn` is the function the step's
/// operator annihilates; only its logarithmic derivative enters, so the same
/// expression serves both directions.
ScalarField transformed_v(const Background& bg, const ScalarField& seed_fn) {
  const ScalarField ls = log_derivative(seed_fn);
  const ScalarField r = sqrt_field(bg.q / bg.m);
  const ScalarField s = sqrt_field(bg.q * bg.m);
  return bg.v - 2.0 * (r * derive(ls / s, 1)) - coefficient_shift(bg);
}

DarbouxOp build_op(const ScalarField& seed_fn, double lambda, OpDirection dir,
                   BackgroundPtr source, BackgroundPtr target) {
  const ScalarField ls = log_derivative(seed_fn);
  const ScalarField inv_s = 1.0 / sqrt_field(source->q * source->m);
  DarbouxOp op;
  if (dir == OpDirection::forward) {
    op.K = -ls;
    op.B = inv_s;
    op.A = op.B * op.K;
  } else {
    op.K = ls;
    op.B = -inv_s;
    op.A = inv_s * op.K;
  }
  op.lambda = lambda;
  op.direction = dir;
  op.beta = 1.0;
  op.seed_fn = seed_fn;
  op.source = std::move(source);
  op.target = std::move(target);
  return op;
}

/// Guarantee a first-derivative row so the equation re-extension can run;
/// fields without carried rows get a finite-difference row.
ScalarField ensure_row1(const ScalarField& f) {
  if (f.depth() >= 1) return f;
  return ScalarField(f.grid_ptr(), f.values(), {derive(f, 1).values()});
}

void require_distinct(double l1, double l2, const char* who) {
  if (std::abs(l1 - l2) <=
      1e-12 * (1.0 + std::max(std::abs(l1), std::abs(l2)))) {
    std::ostringstream os;
    os << who << ": transformation energies coincide (lambda=" << fmt(l1)
       << "); first-order steps need pairwise distinct energies, and "
          "equal-energy deformations belong to the integral transform";
    throw ArgumentError(os.str());
  }
}

/// Interior mask that also drops nodes where the seed nearly vanishes; the
/// superpotential is singular there and residuals measured at such nodes
/// reflect the pole, not the algebra.
std::vector<char> seed_mask(const ScalarField& seed, std::size_t margin) {
  const double cutoff = 1e-12 * max_abs(seed);
  std::vector<char> keep(seed.size(), 0);
  for (std::size_t i = margin; i + margin < seed.size(); ++i)
    keep[i] = std::abs(seed[i]) >= cutoff ? 1 : 0;
  return keep;
}

double masked_max_abs(const ScalarField& f, const std::vector<char>& keep) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (keep[i]) m = std::max(m, std::abs(f[i]));
  return m;
}

/// Literal Hamiltonian application H f = (1/q)(-(d/dx)[(1/m) f'] + v f).
ScalarField apply_hamiltonian(const Background& b, const ScalarField& f) {
  return (b.v * f - derive(derive(f, 1) / b.m, 1)) / b.q;
}

Seed seed_unchecked(Solution sol, double lambda) {
  Seed s;
  s.lambda = lambda;
  s.nodeless = values_nodeless(sol.phi.values());
  s.residual = sol.residual;
  s.solution = std::move(sol);
  return s;
}

}  // namespace

Seed make_seed(const BackgroundPtr& bg, double lambda, const Solution& U,
               double tol) {
  if (!bg) throw ArgumentError("make_seed: background is null");
  if (!(tol > 0.0)) throw ArgumentError("make_seed: tolerance must be positive");
  if (!same_grid(U.phi.grid(), bg->grid()))
    throw ArgumentError(
        "make_seed: candidate lives on a different grid than the background");
  if (max_abs(U.phi) == 0.0)
    throw ArgumentError("make_seed: candidate is identically zero");
  const double res = equation_residual(*bg, U.phi.values_only(), lambda);
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "make_seed: candidate does not solve the problem at energy "
       << fmt(lambda) << " (equation residual " << fmt(res)
       << " exceeds tolerance " << fmt(tol) << ")";
    throw NotASolutionError(os.str());
  }
  Seed out;
  out.solution = U;
  out.solution.energy = lambda;
  out.solution.residual = res;
  out.solution.background = bg;
  if (out.solution.role == SolutionRole::generic)
    out.solution.role = SolutionRole::seed;
  out.lambda = lambda;
  out.nodeless = values_nodeless(U.phi.values());
  out.residual = res;
  return out;
}

BackgroundPtr transformed_potential(const BackgroundPtr& bg, const Seed& seed) {
  if (!bg) throw ArgumentError("transformed_potential: background is null");
  if (!same_grid(seed.solution.phi.grid(), bg->grid()))
    throw ArgumentError(
        "transformed_potential: seed lives on a different grid than the "
        "background");
  ScalarField vt = transformed_v(*bg, seed.solution.phi);
  std::vector<std::string> warnings = bg->warnings;
  if (!seed.nodeless)
    warnings.push_back(
        "transformation function has zeros; the transformed potential is "
        "singular near them");
  std::string label = bg->label.empty() ? std::string("background") : bg->label;
  label += " / step(" + fmt(seed.lambda) + ")";
  return make_background(bg->m, bg->q, std::move(vt), std::move(label),
                         std::move(warnings));
}

DarbouxOp operator_from_seed(const Seed& seed, OpDirection direction) {
  const BackgroundPtr& src = seed.solution.background;
  if (!src)
    throw ArgumentError("operator_from_seed: seed has no background attached");
  BackgroundPtr tgt = transformed_potential(src, seed);
  return build_op(seed.solution.phi, seed.lambda, direction, src,
                  std::move(tgt));
}

DarbouxOp counterpart_operator(const DarbouxOp& op) {
  if (!op.source || !op.target)
    throw ArgumentError("counterpart_operator: operator not initialized");
  const ScalarField cs =
      sqrt_field(op.source->m / op.source->q) / op.seed_fn;
  const OpDirection flipped = op.direction == OpDirection::forward
                                  ? OpDirection::adjoint
                                  : OpDirection::forward;
  return build_op(cs, op.lambda, flipped, op.target, op.source);
}

ScalarField apply_raw(const DarbouxOp& op, const ScalarField& f) {
  if (!op.source) throw ArgumentError("apply_raw: operator not initialized");
  if (!same_grid(f.grid(), op.A.grid()))
    throw ArgumentError("apply_raw: field lives on a different grid than the "
                        "operator");
  return op.A * f + op.B * derive(f, 1);
}

Solution apply(const DarbouxOp& op, const Solution& phi) {
  if (!op.source || !op.target)
    throw ArgumentError("apply: operator not initialized");
  if (!same_grid(phi.phi.grid(), op.source->grid()))
    throw ArgumentError(
        "apply: solution lives on a different grid than the operator");
  const ScalarField raw = ensure_row1(apply_raw(op, phi.phi));
  const ScalarField ext = equation_jet(*op.target, raw, phi.energy);
  Solution out;
  out.phi = ext;
  out.energy = phi.energy;
  out.role = SolutionRole::generic;
  out.residual = equation_residual(*op.target, ext.values_only(), phi.energy);
  out.background = op.target;
  return out;
}

std::pair<Solution, Solution> eta_pair(const BackgroundPtr& bg,
                                       const Seed& seed, double x0) {
  if (!bg) throw ArgumentError("eta_pair: background is null");
  if (!same_grid(seed.solution.phi.grid(), bg->grid()))
    throw ArgumentError(
        "eta_pair: seed lives on a different grid than the background");
  if (!seed.nodeless)
    throw NodalSeedError(
        "eta_pair: the reciprocal construction needs a nodeless "
        "transformation function; this one vanishes or changes sign");
  const BackgroundPtr tbg = transformed_potential(bg, seed);
  const ScalarField& U = seed.solution.phi;
  const ScalarField eta = sqrt_field(bg->m / bg->q) / U;
  const ScalarField eta_hat =
      eta * integrate_cumulative(bg->q * (U * U), x0);
  Solution e;
  e.phi = eta;
  e.energy = seed.lambda;
  e.role = SolutionRole::eta;
  e.residual = equation_residual(*tbg, eta.values_only(), seed.lambda);
  e.background = tbg;
  Solution eh;
  eh.phi = eta_hat;
  eh.energy = seed.lambda;
  eh.role = SolutionRole::eta_hat;
  eh.residual = equation_residual(*tbg, eta_hat.values_only(), seed.lambda);
  eh.background = tbg;
  return {std::move(e), std::move(eh)};
}

AddStateResult add_bound_state(const BackgroundPtr& bg, const Seed& eta_seed) {
  if (!bg) throw ArgumentError("add_bound_state: background is null");
  if (!same_grid(eta_seed.solution.phi.grid(), bg->grid()))
    throw ArgumentError(
        "add_bound_state: auxiliary function lives on a different grid than "
        "the background");
  if (!eta_seed.nodeless)
    throw NodalSeedError(
        "add_bound_state: the auxiliary function vanishes or changes sign; "
        "adding a level needs a nodeless one");
  const ScalarField& eta = eta_seed.solution.phi;
  const std::vector<double>& ev = eta.values();
  const std::size_t n = ev.size();
  std::size_t imax = 0;
  double vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(ev[i]);
    if (a > vmax) {
      vmax = a;
      imax = i;
    }
  }
  std::vector<std::string> warnings = bg->warnings;
  if (imax > n / 10 && imax < (9 * n) / 10 &&
      std::abs(ev.front()) < 0.1 * vmax && std::abs(ev.back()) < 0.1 * vmax)
    warnings.push_back(
        "auxiliary function peaks in the interior and decays toward both "
        "ends; the requested level may already be present, making the "
        "request degenerate");
  ScalarField vt = transformed_v(*bg, eta);
  std::string label = bg->label.empty() ? std::string("background") : bg->label;
  label += " + level(" + fmt(eta_seed.lambda) + ")";
  BackgroundPtr tgt = make_background(bg->m, bg->q, std::move(vt),
                                      std::move(label), std::move(warnings));
  DarbouxOp op =
      build_op(eta, eta_seed.lambda, OpDirection::adjoint, bg, tgt);
  const ScalarField U = sqrt_field(bg->m / bg->q) / eta;
  const ScalarField U_hat =
      U * integrate_cumulative(bg->q * (eta * eta), bg->grid().x_min);
  AddStateResult out;
  out.background = tgt;
  out.bound_state.phi = U;
  out.bound_state.energy = eta_seed.lambda;
  out.bound_state.role = SolutionRole::bound;
  out.bound_state.residual =
      equation_residual(*tgt, U.values_only(), eta_seed.lambda);
  out.bound_state.background = tgt;
  out.op = std::move(op);
  out.second_solution.phi = U_hat;
  out.second_solution.energy = eta_seed.lambda;
  out.second_solution.role = SolutionRole::liouville;
  out.second_solution.residual =
      equation_residual(*tgt, U_hat.values_only(), eta_seed.lambda);
  out.second_solution.background = tgt;
  return out;
}

Solution ChainResult::map(const Solution& phi) const {
  if (steps.empty())
    throw ArgumentError("chain map: the chain has no steps to apply");
  Solution cur = apply(steps.front().op, phi);
  for (std::size_t j = 1; j < steps.size(); ++j) cur = apply(steps[j].op, cur);
  return cur;
}

ChainResult chain_transform(const BackgroundPtr& bg,
                            const std::vector<Seed>& seeds,
                            OpDirection direction) {
  if (!bg) throw ArgumentError("chain_transform: background is null");
  if (seeds.empty())
    throw ArgumentError(
        "chain_transform: at least one transformation function is required");
  for (const Seed& s : seeds)
    if (!same_grid(s.solution.phi.grid(), bg->grid()))
      throw ArgumentError(
          "chain_transform: every transformation function must live on the "
          "background grid");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      require_distinct(seeds[i].lambda, seeds[j].lambda, "chain_transform");

  ChainResult result;
  std::vector<Solution> rest;
  rest.reserve(seeds.size() - 1);
  for (std::size_t j = 1; j < seeds.size(); ++j)
    rest.push_back(seeds[j].solution);

  Seed chi = seeds.front();
  BackgroundPtr current = bg;
  for (std::size_t step = 0; step < seeds.size(); ++step) {
    DarbouxOp op = operator_from_seed(chi, direction);
    current = op.target;
    if (step == 0)
      result.accumulated_K = op.K;
    else
      result.accumulated_K = result.accumulated_K + op.K;
    result.steps.push_back(ChainStep{std::move(chi), std::move(op), current});
    if (step + 1 == seeds.size()) break;
    const DarbouxOp& built = result.steps.back().op;
    for (Solution& s : rest) {
      const double before = max_abs(s.phi);
      s = apply(built, s);
      if (max_abs(s.phi) <= 1e-13 * before) {
        std::ostringstream os;
        os << "chain_transform: intermediate transformation function "
              "vanishes after step "
           << step
           << "; the remaining function is annihilated by the chain "
              "(degenerate sequence)";
        throw DegenerateChainError(os.str());
      }
    }
    Solution next = std::move(rest.front());
    rest.erase(rest.begin());
    chi = seed_unchecked(std::move(next), seeds[step + 1].lambda);
  }
  result.background = current;

  const ScalarField S = sqrt_field(bg->q * bg->m);
  const ScalarField R = sqrt_field(bg->q / bg->m);
  const ScalarField curl = R * derive(result.accumulated_K / S, 1);
  const double nsteps = static_cast<double>(seeds.size());
  const ScalarField shift = nsteps * coefficient_shift(*bg);
  const ScalarField v_acc = direction == OpDirection::forward
                                ? bg->v + 2.0 * curl - shift
                                : bg->v - 2.0 * curl - shift;
  result.accumulated_form_deviation =
      relative_interior_error(v_acc, current->v);
  return result;
}

std::pair<BackgroundPtr, Solution> order2_wronskian_transform(
    const BackgroundPtr& bg, const Seed& seed1, const Seed& seed2,
    const Solution& phi) {
  if (!bg)
    throw ArgumentError("order2_wronskian_transform: background is null");
  for (const ScalarField* f :
       {&seed1.solution.phi, &seed2.solution.phi, &phi.phi})
    if (!same_grid(f->grid(), bg->grid()))
      throw ArgumentError(
          "order2_wronskian_transform: all inputs must live on the "
          "background grid");
  require_distinct(seed1.lambda, seed2.lambda, "order2_wronskian_transform");
  const ScalarField& U1 = seed1.solution.phi;
  const ScalarField& U2 = seed2.solution.phi;
  const ScalarField W12 = U1 * derive(U2, 1) - derive(U1, 1) * U2;
  if (max_abs(W12) == 0.0)
    throw DegenerateChainError(
        "order2_wronskian_transform: the pairwise Wronskian vanishes "
        "identically; proportional transformation functions form a "
        "degenerate pair");
  // the Wronskian of an admissible pair keeps one sign; an exact zero or a
  // sign change marks a pole of the transformed potential on the grid
  for (std::size_t i = 0; i < W12.size(); ++i) {
    if (W12[i] == 0.0) {
      std::ostringstream os;
      os << "order2_wronskian_transform: pairwise Wronskian vanishes at node "
         << i << " (x=" << fmt(bg->grid().x[i]) << "); degenerate pair";
      throw DegenerateChainError(os.str());
    }
    if (i + 1 < W12.size() &&
        std::signbit(W12[i]) != std::signbit(W12[i + 1])) {
      std::ostringstream os;
      os << "order2_wronskian_transform: pairwise Wronskian changes sign "
            "between nodes "
         << i << " and " << i + 1 << " (x=" << fmt(bg->grid().x[i])
         << "); the pair is degenerate there";
      throw DegenerateChainError(os.str());
    }
  }
  const ScalarField inner = (sqrt_field(bg->m) * derive(W12 / bg->m, 1)) /
                            (sqrt_field(bg->q) * W12);
  ScalarField v2 = bg->v - 2.0 * (sqrt_field(bg->q / bg->m) * derive(inner, 1));
  std::string label = bg->label.empty() ? std::string("background") : bg->label;
  label += " / pair(" + fmt(seed1.lambda) + "," + fmt(seed2.lambda) + ")";
  BackgroundPtr out = make_background(bg->m, bg->q, std::move(v2),
                                      std::move(label), bg->warnings);
  const ScalarField W123 = three_wronskian(U1, U2, phi.phi);
  const ScalarField raw = W123 / (bg->q * bg->m * W12);
  const ScalarField ext = equation_jet(*out, ensure_row1(raw), phi.energy);
  Solution mapped;
  mapped.phi = ext;
  mapped.energy = phi.energy;
  mapped.role = SolutionRole::generic;
  mapped.residual = equation_residual(*out, ext.values_only(), phi.energy);
  mapped.background = out;
  return {std::move(out), std::move(mapped)};
}

SusyReport susy_residuals(const Background& bg, const Background& bg_t,
                          const DarbouxOp& op,
                          const std::vector<Solution>& probes) {
  if (!op.source || !op.target)
    throw ArgumentError("susy_residuals: operator not initialized");
  if (probes.empty())
    throw ArgumentError(
        "susy_residuals: at least one probe solution is required");
  if (!same_grid(bg.grid(), bg_t.grid()) ||
      !same_grid(bg.grid(), op.A.grid()))
    throw ArgumentError("susy_residuals: grids do not match");
  for (const Solution& p : probes)
    if (!same_grid(p.phi.grid(), bg.grid()))
      throw ArgumentError(
          "susy_residuals: probe lives on a different grid");

  // The intertwining and factorization checks stack up to three nested
  // derivatives on sampled (value-only) data.  Each nesting level propagates
  // the one-sided boundary stencil's distinct error coefficient one node
  // inward and costs it one order of accuracy, so the first three nodes at
  // either end carry O(1) noise that no refinement removes.  A margin of four
  // keeps the reported maxima on nodes where every stencil involved was
  // central, with one node to spare.
  const std::vector<char> keep = seed_mask(op.seed_fn, 4);
  const DarbouxOp partner = counterpart_operator(op);
  SusyReport rep;

  for (const Solution& probe : probes) {
    const ScalarField& f = probe.phi;
    const double E = probe.energy;

    const ScalarField t1 = apply_raw(op, apply_hamiltonian(bg, f));
    const ScalarField mapped = apply_raw(op, f);
    const ScalarField t2 = apply_hamiltonian(bg_t, mapped);
    const double scale_tw =
        1.0 + std::max(masked_max_abs(t1, keep), masked_max_abs(t2, keep));
    rep.intertwining = std::max(
        rep.intertwining, masked_max_abs(t1 - t2, keep) / scale_tw);

    const ScalarField comp_src = apply_raw(partner, mapped);
    const ScalarField want_src = (E - op.lambda) * f;
    const double scale_src = 1.0 + masked_max_abs(want_src, keep);
    rep.factor_source =
        std::max(rep.factor_source,
                 masked_max_abs(comp_src - want_src, keep) / scale_src);

    const ScalarField comp_tgt = apply_raw(op, apply_raw(partner, mapped));
    const ScalarField want_tgt = (E - op.lambda) * mapped;
    const double scale_tgt = 1.0 + masked_max_abs(want_tgt, keep);
    rep.factor_target =
        std::max(rep.factor_target,
                 masked_max_abs(comp_tgt - want_tgt, keep) / scale_tgt);
  }

  const ScalarField k_ric =
      op.direction == OpDirection::forward ? op.K : -op.K;
  const ScalarField ric = (k_ric * k_ric - derive(k_ric, 1)) / (bg.q * bg.m) -
                          bg.v / bg.q -
                          (derive(1.0 / bg.m, 1) * k_ric) / bg.q + op.lambda;
  const double scale_ric =
      1.0 + std::abs(op.lambda) + interior_max_abs(bg.v / bg.q, 2);
  rep.riccati = masked_max_abs(ric, keep) / scale_ric;

  const ScalarField k1 = apply_raw(op, op.seed_fn);
  const double scale_k1 =
      1.0 + std::max(masked_max_abs(op.A * op.seed_fn, keep),
                     masked_max_abs(op.B * derive(op.seed_fn, 1), keep));
  rep.kernel_op = masked_max_abs(k1, keep) / scale_k1;

  const ScalarField k2 = apply_raw(partner, partner.seed_fn);
  const double scale_k2 =
      1.0 + std::max(masked_max_abs(partner.A * partner.seed_fn, keep),
                     masked_max_abs(partner.B * derive(partner.seed_fn, 1),
                                    keep));
  rep.kernel_counterpart = masked_max_abs(k2, keep) / scale_k2;
  return rep;
}

}  // namespace darboux
