#include "darboux/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux::models {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require_grid(const GridPtr& g, const char* who) {
  if (!g) throw ArgumentError(std::string(who) + ": grid is null");
}

// --- hyperbolic polynomials ------------------------------------------------
// A sum of products coef * prod_i f_{p_i}(w_i t) over a fixed frequency list,
// where f_0 = cosh and f_1 = sinh. The family is closed under d/dt —
// differentiating one factor flips its parity bit and multiplies by its
// frequency — which is what lets every Wronskian-built potential be
// evaluated analytically instead of by finite differences.
struct HPoly {
  std::vector<double> w;
  std::map<unsigned, double> terms;  // parity bitmask -> coefficient
};

HPoly derivative(const HPoly& p) {
  HPoly d{p.w, {}};
  for (const auto& [par, c] : p.terms)
    for (std::size_t i = 0; i < p.w.size(); ++i)
      d.terms[par ^ (1u << i)] += c * p.w[i];
  return d;
}

double eval(const HPoly& p, double t) {
  double sum = 0.0;
  for (const auto& [par, c] : p.terms) {
    double prod = c;
    for (std::size_t i = 0; i < p.w.size(); ++i)
      prod *=
          ((par >> i) & 1u) ? std::sinh(p.w[i] * t) : std::cosh(p.w[i] * t);
    sum += prod;
  }
  return sum;
}

/// Wronskian of { f_{odd_i}(w_i t) } expanded symbolically from the
/// determinant: the order-r derivative of column i contributes a factor
/// w_i^r and r parity flips, and the permutation sign comes from the
/// inversion count.
HPoly wronskian_poly(std::vector<double> w, const std::vector<bool>& odd) {
  const std::size_t n = w.size();
  HPoly p{std::move(w), {}};
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    double coef = (inversions % 2 == 0) ? 1.0 : -1.0;
    unsigned par = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t i = perm[r];  // column placed at derivative order r
      for (std::size_t k = 0; k < r; ++k) coef *= p.w[i];
      const unsigned bit = (odd[i] ? 1u : 0u) ^ (unsigned(r) & 1u);
      par |= bit << i;
    }
    p.terms[par] += coef;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return p;
}

/// (ln W)'' at t, evaluated through the ratios W'/W and W''/W so the
/// exponential growth of W cancels instead of overflowing.
struct LogCurvature {
  HPoly W, W1, W2;
  explicit LogCurvature(HPoly base)
      : W(std::move(base)), W1(derivative(W)), W2(derivative(W1)) {}
  double operator()(double t) const {
    const double w = eval(W, t);
    const double r1 = eval(W1, t) / w;
    const double r2 = eval(W2, t) / w;
    return r2 - r1 * r1;
  }
};

/// a(x)/(k sqrt x) with its first three derivative rows, for a numerator
/// obeying a'' = curvature_sign * k^2 * a (hyperbolic +1, trigonometric -1);
/// ap must be the true derivative a'.
ScalarField sqrtx_ray(const GridPtr& g, double k, double curvature_sign,
                      const std::function<double(double)>& a,
                      const std::function<double(double)>& ap) {
  const double s = curvature_sign;
  auto f0 = [k, a](double x) { return a(x) / (k * std::sqrt(x)); };
  auto f1 = [k, a, ap](double x) {
    return ap(x) / (k * std::sqrt(x)) - a(x) / (2.0 * k * std::pow(x, 1.5));
  };
  auto f2 = [k, s, a, ap](double x) {
    return s * k * a(x) / std::sqrt(x) - ap(x) / (k * std::pow(x, 1.5)) +
           0.75 * a(x) / (k * std::pow(x, 2.5));
  };
  auto f3 = [k, s, a, ap](double x) {
    return s * k * ap(x) / std::sqrt(x) -
           1.5 * s * k * a(x) / std::pow(x, 1.5) +
           2.25 * ap(x) / (k * std::pow(x, 2.5)) -
           1.875 * a(x) / (k * std::pow(x, 3.5));
  };
  return sample(g, f0, {f1, f2, f3});
}

Solution as_solution(ScalarField f, double E, BackgroundPtr bg) {
  Solution s;
  s.phi = std::move(f);
  s.energy = E;
  s.background = std::move(bg);
  return s;
}

/// 1 + c (tanh(w t) - tanh(w t0)) and the log-curvature it contributes,
/// shared by both families; throws when the argument is dragged to or
/// through zero on the sampled t values.
struct PhaseFactor {
  double c, w, t0, guard;
  const char* who;
  double value(double t) const {
    return 1.0 + c * (std::tanh(w * t) - std::tanh(w * t0));
  }
  double checked(double t, std::size_t node) const {
    const double p = value(t);
    if (!(p >= guard)) {
      throw SingularDenominatorError(
          std::string(who) + ": deformation factor reaches " + fmt(p) +
          " at node " + std::to_string(node) + " (guard " + fmt(guard) +
          "); the deformed potential would be singular there");
    }
    return p;
  }
  double log_curvature(double t) const {
    const double p = value(t);
    const double sech = 1.0 / std::cosh(w * t);
    const double p1 = c * w * sech * sech;
    const double p2 = -2.0 * w * std::tanh(w * t) * p1;
    const double r1 = p1 / p;
    return p2 / p - r1 * r1;
  }
};

}  // namespace

// --- radial-type example ---------------------------------------------------

BackgroundPtr radial_background(const GridPtr& g) {
  require_grid(g, "radial_background");
  ScalarField m = sample(
      g, [](double x) { return 1.0 / x; },
      {[](double x) { return -1.0 / (x * x); },
       [](double x) { return 2.0 / (x * x * x); },
       [](double x) { return -6.0 / (x * x * x * x); }});
  ScalarField q = sample(g, [](double x) { return x; },
                         {[](double) { return 1.0; },
                          [](double) { return 0.0; },
                          [](double) { return 0.0; }});
  ScalarField v = sample(
      g, [](double x) { return 1.0 / (4.0 * x); },
      {[](double x) { return -1.0 / (4.0 * x * x); },
       [](double x) { return 1.0 / (2.0 * x * x * x); },
       [](double x) { return -3.0 / (2.0 * x * x * x * x); }});
  return make_background(std::move(m), std::move(q), std::move(v),
                         "radial-type");
}

ScalarField radial_ray(const GridPtr& g, double kappa, bool even) {
  require_grid(g, "radial_ray");
  if (!(kappa > 0.0))
    throw ArgumentError("radial_ray: kappa must be positive, got " +
                        fmt(kappa));
  std::function<double(double)> a, ap;
  if (even) {
    a = [kappa](double x) { return std::cosh(kappa * x); };
    ap = [kappa](double x) { return kappa * std::sinh(kappa * x); };
  } else {
    a = [kappa](double x) { return std::sinh(kappa * x); };
    ap = [kappa](double x) { return kappa * std::cosh(kappa * x); };
  }
  return sqrtx_ray(g, kappa, 1.0, a, ap);
}

ScalarField radial_trig_ray(const GridPtr& g, double k, bool sine) {
  require_grid(g, "radial_trig_ray");
  if (!(k > 0.0))
    throw ArgumentError("radial_trig_ray: k must be positive, got " + fmt(k));
  std::function<double(double)> a, ap;
  if (sine) {
    a = [k](double x) { return std::sin(k * x); };
    ap = [k](double x) { return k * std::cos(k * x); };
  } else {
    a = [k](double x) { return std::cos(k * x); };
    ap = [k](double x) { return -k * std::sin(k * x); };
  }
  return sqrtx_ray(g, k, -1.0, a, ap);
}

Seed radial_seed(const BackgroundPtr& bg, double kappa, bool even,
                 double tol) {
  if (!bg) throw ArgumentError("radial_seed: background is null");
  const double lambda = -kappa * kappa;
  return make_seed(bg, lambda,
                   as_solution(radial_ray(bg->grid_ptr(), kappa, even),
                               lambda, bg),
                   tol);
}

ScalarField radial_v1(const GridPtr& g, double kappa) {
  require_grid(g, "radial_v1");
  if (!(kappa > 0.0))
    throw ArgumentError("radial_v1: kappa must be positive, got " +
                        fmt(kappa));
  std::vector<double> out(g->n);
  for (std::size_t i = 0; i < g->n; ++i) {
    const double x = g->x[i];
    const double sech = 1.0 / std::cosh(kappa * x);
    out[i] = 1.0 / (4.0 * x) - 2.0 * x * kappa * kappa * sech * sech;
  }
  return ScalarField(g, std::move(out));
}

ScalarField radial_phi1(const GridPtr& g, double kappa, double k) {
  require_grid(g, "radial_phi1");
  if (!(kappa > 0.0) || !(k > 0.0))
    throw ArgumentError("radial_phi1: kappa and k must be positive");
  std::vector<double> out(g->n);
  for (std::size_t i = 0; i < g->n; ++i) {
    const double x = g->x[i];
    out[i] = -std::cos(k * x) / std::sqrt(x) +
             kappa * std::tanh(kappa * x) * std::sin(k * x) /
                 (k * std::sqrt(x));
  }
  return ScalarField(g, std::move(out));
}

namespace {

ScalarField radial_vn(const GridPtr& g, std::vector<double> kappas,
                      const std::vector<bool>& odd, const char* who) {
  require_grid(g, who);
  for (std::size_t i = 0; i + 1 < kappas.size(); ++i)
    if (!(0.0 < kappas[i] && kappas[i] < kappas[i + 1]))
      throw ArgumentError(std::string(who) +
                          ": kappas must be positive and strictly "
                          "increasing");
  const LogCurvature lc(wronskian_poly(std::move(kappas), odd));
  std::vector<double> out(g->n);
  for (std::size_t i = 0; i < g->n; ++i) {
    const double x = g->x[i];
    out[i] = 1.0 / (4.0 * x) - 2.0 * x * lc(x);
  }
  return ScalarField(g, std::move(out));
}

}  // namespace

ScalarField radial_v2(const GridPtr& g, double kappa1, double kappa2) {
  return radial_vn(g, {kappa1, kappa2}, {false, true}, "radial_v2");
}

ScalarField radial_v3(const GridPtr& g, double kappa1, double kappa2,
                      double kappa3) {
  return radial_vn(g, {kappa1, kappa2, kappa3}, {false, true, true},
                   "radial_v3");
}

ScalarField radial_family_v(const GridPtr& g, double kappa, double Gamma,
                            double x0) {
  require_grid(g, "radial_family_v");
  if (!(kappa > 0.0))
    throw ArgumentError("radial_family_v: kappa must be positive, got " +
                        fmt(kappa));
  const PhaseFactor P{Gamma, kappa, x0,
                      1e-10 * (1.0 + std::abs(Gamma)), "radial_family_v"};
  ScalarField v = radial_v1(g, kappa);
  std::vector<double> out(g->n);
  for (std::size_t i = 0; i < g->n; ++i) {
    const double x = g->x[i];
    P.checked(x, i);
    out[i] = v[i] - 2.0 * x * P.log_curvature(x);
  }
  return ScalarField(g, std::move(out));
}

ScalarField radial_family_seed_fn(const GridPtr& g, double kappa) {
  require_grid(g, "radial_family_seed_fn");
  if (!(kappa > 0.0))
    throw ArgumentError(
        "radial_family_seed_fn: kappa must be positive, got " + fmt(kappa));
  // sqrt(kappa/x) sech(kappa x) = (1/sqrt(kappa)) * (1/x) / ray, built by
  // field arithmetic so the jet rows come out exact
  ScalarField w = sample(
      g, [](double x) { return 1.0 / x; },
      {[](double x) { return -1.0 / (x * x); },
       [](double x) { return 2.0 / (x * x * x); },
       [](double x) { return -6.0 / (x * x * x * x); }});
  return (1.0 / std::sqrt(kappa)) * (w / radial_ray(g, kappa, true));
}

// --- power-law-mass example ------------------------------------------------

BackgroundPtr powermass_background(const GridPtr& g, double alpha) {
  require_grid(g, "powermass_background");
  if (!(alpha > 0.0))
    throw ArgumentError(
        "powermass_background: alpha must be positive, got " + fmt(alpha));
  const double a2 = alpha * alpha;
  ScalarField m = sample(
      g, [a2](double x) { return a2 / (x * x); },
      {[a2](double x) { return -2.0 * a2 / (x * x * x); },
       [a2](double x) { return 6.0 * a2 / (x * x * x * x); },
       [a2](double x) { return -24.0 * a2 / (x * x * x * x * x); }});
  return make_background(std::move(m), constant_field(g, 1.0),
                         constant_field(g, 0.0), "power-law mass");
}

double powermass_mu(double alpha, double E) {
  if (!(alpha > 0.0))
    throw ArgumentError("powermass_mu: alpha must be positive, got " +
                        fmt(alpha));
  if (!(E < 0.0))
    throw ArgumentError(
        "powermass_mu: designed levels must be negative, got " + fmt(E));
  return std::sqrt(alpha * alpha * (-E) + 0.25);
}

ScalarField powermass_ray(const GridPtr& g, double mu, bool even) {
  require_grid(g, "powermass_ray");
  if (!(mu > 0.0))
    throw ArgumentError("powermass_ray: mu must be positive, got " + fmt(mu));
  auto H = [mu, even](double x) {
    const double t = mu * std::log(x);
    return even ? std::cosh(t) : std::sinh(t);
  };
  auto Hp = [mu, even](double x) {
    const double t = mu * std::log(x);
    return even ? std::sinh(t) : std::cosh(t);
  };
  auto f0 = [H](double x) { return H(x) / std::sqrt(x); };
  auto f1 = [mu, H, Hp](double x) {
    return (mu * Hp(x) - 0.5 * H(x)) / std::pow(x, 1.5);
  };
  auto f2 = [mu, H, Hp](double x) {
    return ((mu * mu + 0.75) * H(x) - 2.0 * mu * Hp(x)) / std::pow(x, 2.5);
  };
  auto f3 = [mu, H, Hp](double x) {
    return (-(4.5 * mu * mu + 1.875) * H(x) +
            (mu * mu * mu + 5.75 * mu) * Hp(x)) /
           std::pow(x, 3.5);
  };
  return sample(g, f0, {f1, f2, f3});
}

Seed powermass_seed(const BackgroundPtr& bg, double alpha, double E,
                    bool even, double tol) {
  if (!bg) throw ArgumentError("powermass_seed: background is null");
  const double mu = powermass_mu(alpha, E);
  return make_seed(bg, E,
                   as_solution(powermass_ray(bg->grid_ptr(), mu, even), E,
                               bg),
                   tol);
}

ScalarField powermass_v1(const GridPtr& g, double alpha, double E1) {
  require_grid(g, "powermass_v1");
  const double mu = powermass_mu(alpha, E1);
  std::vector<double> out(g->n);
  for (std::size_t i = 0; i < g->n; ++i) {
    const double sech = 1.0 / std::cosh(mu * std::log(g->x[i]));
    out[i] = -2.0 * mu * mu / (alpha * alpha) * sech * sech;
  }
  return ScalarField(g, std::move(out));
}

namespace {

ScalarField powermass_vn(const GridPtr& g, double alpha,
                         const std::vector<double>& Es,
                         const std::vector<bool>& odd, const char* who) {
  require_grid(g, who);
  std::vector<double> mus;
  mus.reserve(Es.size());
  for (std::size_t i = 0; i < Es.size(); ++i) {
    if (i > 0 && !(Es[i] < Es[i - 1]))
      throw ArgumentError(std::string(who) +
                          ": designed levels must be strictly decreasing");
    mus.push_back(powermass_mu(alpha, Es[i]));
  }
  const LogCurvature lc(wronskian_poly(std::move(mus), odd));
  std::vector<double> out(g->n);
  const double a2 = alpha * alpha;
  for (std::size_t i = 0; i < g->n; ++i)
    out[i] = -2.0 / a2 * lc(std::log(g->x[i]));
  return ScalarField(g, std::move(out));
}

}  // namespace

ScalarField powermass_v2(const GridPtr& g, double alpha, double E1,
                         double E2) {
  return powermass_vn(g, alpha, {E1, E2}, {false, true}, "powermass_v2");
}

ScalarField powermass_v3(const GridPtr& g, double alpha, double E1,
                         double E2, double E3) {
  return powermass_vn(g, alpha, {E1, E2, E3}, {false, true, false},
                      "powermass_v3");
}

ScalarField powermass_family_v(const GridPtr& g, double alpha, double E1,
                               double Gamma, double x0) {
  require_grid(g, "powermass_family_v");
  const double mu = powermass_mu(alpha, E1);
  const PhaseFactor P{Gamma * alpha / mu, mu, std::log(x0),
                      1e-10 * (1.0 + std::abs(Gamma)), "powermass_family_v"};
  ScalarField v = powermass_v1(g, alpha, E1);
  std::vector<double> out(g->n);
  const double a2 = alpha * alpha;
  for (std::size_t i = 0; i < g->n; ++i) {
    const double t = std::log(g->x[i]);
    P.checked(t, i);
    out[i] = v[i] - 2.0 / a2 * P.log_curvature(t);
  }
  return ScalarField(g, std::move(out));
}

ScalarField powermass_family_seed_fn(const GridPtr& g, double alpha,
                                     double E1) {
  require_grid(g, "powermass_family_seed_fn");
  const double mu = powermass_mu(alpha, E1);
  // sqrt(alpha) sech(mu ln x)/sqrt(x) = (1/sqrt(alpha)) * (alpha/x) / ray
  ScalarField w = sample(
      g, [alpha](double x) { return alpha / x; },
      {[alpha](double x) { return -alpha / (x * x); },
       [alpha](double x) { return 2.0 * alpha / (x * x * x); },
       [alpha](double x) { return -6.0 * alpha / (x * x * x * x); }});
  return (1.0 / std::sqrt(alpha)) * (w / powermass_ray(g, mu, true));
}

// --- shape analysis ---------------------------------------------------------

std::vector<std::size_t> local_minima(const ScalarField& v,
                                      std::size_t margin) {
  std::vector<std::size_t> idx;
  const std::size_t n = v.size();
  if (n < 2 * margin + 3) return idx;
  const std::size_t lo = std::max<std::size_t>(margin, 1);
  const std::size_t hi = n - 1 - std::max<std::size_t>(margin, 1);
  for (std::size_t i = lo; i <= hi; ++i)
    if (v[i] < v[i - 1] && v[i] < v[i + 1]) idx.push_back(i);
  return idx;
}

}  // namespace darboux::models
