#include "darboux/gse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "darboux/errors.hpp"

namespace darboux {

namespace {

constexpr double kOverflowGuard = 1e250;

void require_positive(const ScalarField& f, const char* name) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      std::ostringstream os;
      os << name << " must be strictly positive; violated at node " << i
         << " (x = " << f.grid().x[i] << ", value = " << f[i] << ")";
      throw ArgumentError(os.str());
    }
  }
}

/// Values of f at the n-1 cell midpoints x_i + h/2, fourth-order accurate.
/// Fields carrying rows to depth >= 2 use the symmetric average of the two
/// one-sided Taylor evaluations (the leading odd error terms cancel);
/// sampled-only fields use cubic four-point interpolation with shifted
/// stencils in the first and last cell.
std::vector<double> cell_midpoints(const ScalarField& f) {
  const Grid& g = f.grid();
  const std::size_t n = g.n;
  const double h = g.h;
  std::vector<double> mid(n - 1);
  if (f.depth() >= 2) {
    const auto& r1 = f.derivative_row(1);
    const auto& r2 = f.derivative_row(2);
    const bool d3 = f.depth() >= 3;
    const std::vector<double>* r3 = d3 ? &f.derivative_row(3) : nullptr;
    const double c1 = 0.5 * h, c2 = h * h / 8.0, c3 = h * h * h / 48.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double left = f[i] + c1 * r1[i] + c2 * r2[i];
      double right = f[i + 1] - c1 * r1[i + 1] + c2 * r2[i + 1];
      if (d3) {
        left += c3 * (*r3)[i];
        right -= c3 * (*r3)[i + 1];
      }
      mid[i] = 0.5 * (left + right);
    }
    return mid;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i == 0)
      mid[i] = (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
    else if (i == n - 2)
      mid[i] =
          (f[n - 4] - 5.0 * f[n - 3] + 15.0 * f[n - 2] + 5.0 * f[n - 1]) / 16.0;
    else
      mid[i] = (-f[i - 1] + 9.0 * f[i] + 9.0 * f[i + 1] - f[i + 2]) / 16.0;
  }
  return mid;
}

[[noreturn]] void throw_overflow(const Grid& g, std::size_t last_valid) {
  std::ostringstream os;
  os << "solution overflow during integration; last valid node " << last_valid
     << " (x = " << g.x[last_valid] << ")";
  throw IntegrationOverflowError(os.str());
}

}  // namespace

BackgroundPtr make_background(ScalarField m, ScalarField q, ScalarField v,
                              std::string label,
                              std::vector<std::string> warnings) {
  if (!same_grid(m.grid(), q.grid()) || !same_grid(m.grid(), v.grid()))
    throw ArgumentError("background fields must share one grid");
  require_positive(m, "effective mass m");
  require_positive(q, "energy weight q");
  auto bg = std::make_shared<Background>();
  bg->m = std::move(m);
  bg->q = std::move(q);
  bg->v = std::move(v);
  bg->label = std::move(label);
  bg->warnings = std::move(warnings);
  return bg;
}

ScalarField equation_jet(const Background& bg, const ScalarField& phi,
                         double E) {
  if (phi.depth() < 1)
    throw ArgumentError("equation_jet needs phi with its first derivative row");
  const GridPtr& g = phi.grid_ptr();
  const ScalarField phi0(g, phi.values());
  const ScalarField phi1(g, phi.derivative_row(1));
  const ScalarField mp = derive(bg.m, 1);
  const ScalarField a = mp / bg.m;
  const ScalarField w = bg.v - E * bg.q;                 // v - qE
  const ScalarField b = bg.m * w;
  const ScalarField row2 = a * phi1 + b * phi0;
  const ScalarField a_prime = derive(bg.m, 2) / bg.m - a * a;
  const ScalarField b_prime =
      mp * w + bg.m * (derive(bg.v, 1) - E * derive(bg.q, 1));
  const ScalarField row3 = (a_prime + b) * phi1 + a * row2 + b_prime * phi0;
  return ScalarField(g, phi.values(),
                     {phi.derivative_row(1), row2.values(), row3.values()});
}

Solution integrate_solution(const BackgroundPtr& bg, double E, double phi0,
                            double p0, double x_start, SolutionRole role) {
  if (!bg) throw ArgumentError("integrate_solution requires a background");
  if (phi0 == 0.0 && p0 == 0.0)
    throw ArgumentError(
        "initial data (0, 0) would produce the zero solution");
  const Grid& g = bg->grid();
  const std::size_t n = g.n;
  const double h = g.h;
  const std::size_t i0 = nearest_node(g, x_start);

  // Node and midpoint samples of the two coefficient functions m and v - qE.
  const ScalarField w_field = bg->v - E * bg->q;
  const std::vector<double> m_mid = cell_midpoints(bg->m);
  const std::vector<double> w_mid = cell_midpoints(w_field);

  std::vector<double> phi(n), p(n);
  phi[i0] = phi0;
  p[i0] = p0;

  // One RK4 step across cell c (from node `from` to node `to`); sgn is the
  // step direction. The system is phi' = m p, p' = (v - qE) phi.
  auto step = [&](std::size_t from, std::size_t to, std::size_t c,
                  double sgn) {
    const double hs = sgn * h;
    const double m0 = bg->m[from], w0 = w_field[from];
    const double m1 = m_mid[c], w1 = w_mid[c];
    const double m2 = bg->m[to], w2 = w_field[to];
    const double f = phi[from], pp = p[from];
    const double k1f = m0 * pp, k1p = w0 * f;
    const double f2 = f + 0.5 * hs * k1f, p2 = pp + 0.5 * hs * k1p;
    const double k2f = m1 * p2, k2p = w1 * f2;
    const double f3 = f + 0.5 * hs * k2f, p3 = pp + 0.5 * hs * k2p;
    const double k3f = m1 * p3, k3p = w1 * f3;
    const double f4 = f + hs * k3f, p4 = pp + hs * k3p;
    const double k4f = m2 * p4, k4p = w2 * f4;
    phi[to] = f + hs / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    p[to] = pp + hs / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (!(std::abs(phi[to]) < kOverflowGuard) ||
        !(std::abs(p[to]) < kOverflowGuard))
      throw_overflow(g, from);
  };

  for (std::size_t i = i0; i + 1 < n; ++i) step(i, i + 1, i, +1.0);
  for (std::size_t i = i0; i > 0; --i) step(i, i - 1, i - 1, -1.0);

  // phi' = m p gives the first derivative row exactly in the model; rows 2-3
  // follow from the equation itself.
  std::vector<double> row1(n);
  for (std::size_t i = 0; i < n; ++i) row1[i] = bg->m[i] * p[i];
  ScalarField phi_field(bg->grid_ptr(), std::move(phi), {std::move(row1)});
  phi_field = equation_jet(*bg, phi_field, E);

  Solution s;
  s.phi = phi_field;
  s.energy = E;
  s.role = role;
  s.residual = equation_residual(*bg, phi_field.values_only(), E);
  s.background = bg;
  return s;
}

Solution second_solution_liouville(const BackgroundPtr& bg, const Solution& U,
                                   double x0) {
  if (!bg) throw ArgumentError("second_solution_liouville requires a background");
  const ScalarField& u = U.phi;
  if (!same_grid(u.grid(), bg->grid()))
    throw ArgumentError("solution and background live on different grids");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0 || (i > 0 && std::signbit(u[i]) != std::signbit(u[i - 1]))) {
      std::ostringstream os;
      os << "seed solution has a node near grid index " << i
         << " (x = " << u.grid().x[i]
         << "); the integrand m/U^2 is singular there";
      throw NodalSeedError(os.str());
    }
  }
  const ScalarField integrand = bg->m / (u * u);
  const ScalarField integral = integrate_cumulative(integrand, x0);
  Solution out;
  out.phi = u * integral;
  out.energy = U.energy;
  out.role = SolutionRole::liouville;
  out.residual = equation_residual(*bg, out.phi.values_only(), U.energy);
  out.background = bg;
  return out;
}

namespace {

/// Symmetric tridiagonal representation of the q-symmetrized operator on the
/// interior nodes.
struct SymTridiag {
  std::vector<double> d;  ///< diagonal, size N
  std::vector<double> e;  ///< subdiagonal, size N-1
};

SymTridiag discretize(const Background& bg) {
  const Grid& g = bg.grid();
  const std::size_t n = g.n;
  const double h2 = g.h * g.h;
  const std::size_t N = n - 2;
  std::vector<double> inv_m_half(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    inv_m_half[i] = 2.0 / (bg.m[i] + bg.m[i + 1]);
  SymTridiag t;
  t.d.resize(N);
  t.e.resize(N - 1);
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t i = j + 1;  // grid index
    const double diag =
        (inv_m_half[i] + inv_m_half[i - 1]) / h2 + bg.v[i];
    t.d[j] = diag / bg.q[i];
  }
  for (std::size_t j = 0; j + 1 < N; ++j) {
    const std::size_t i = j + 1;
    t.e[j] = (-inv_m_half[i] / h2) / std::sqrt(bg.q[i] * bg.q[i + 1]);
  }
  return t;
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x
/// (Sturm sequence via the LDL^T pivot recurrence). Zero pivots are floored
/// to -pivmin, with pivmin scaled so e^2/pivmin never overflows; a vanishing
/// pivot then counts as negative (the count is taken at x+0).
std::size_t count_below(const SymTridiag& t, double x, double pivmin) {
  std::size_t count = 0;
  double piv = t.d[0] - x;
  if (std::abs(piv) <= pivmin) piv = -pivmin;
  if (piv < 0.0) ++count;
  for (std::size_t j = 1; j < t.d.size(); ++j) {
    piv = (t.d[j] - x) - t.e[j - 1] * t.e[j - 1] / piv;
    if (std::abs(piv) <= pivmin) piv = -pivmin;
    if (piv < 0.0) ++count;
  }
  return count;
}

/// Solve (T - lambda I) y = b for a symmetric tridiagonal T, Gaussian
/// elimination with partial pivoting (the system is intentionally
/// near-singular during inverse iteration).
std::vector<double> shifted_solve(const SymTridiag& t, double lambda,
                                  std::vector<double> b) {
  const std::size_t N = t.d.size();
  std::vector<double> dl(N, 0.0), dd(N), du(N, 0.0), du2(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) dd[j] = t.d[j] - lambda;
  for (std::size_t j = 0; j + 1 < N; ++j) {
    dl[j + 1] = t.e[j];  // subdiagonal entering row j+1
    du[j] = t.e[j];
  }
  // Forward elimination with row swaps.
  for (std::size_t j = 0; j + 1 < N; ++j) {
    if (std::abs(dl[j + 1]) > std::abs(dd[j])) {
      std::swap(dd[j], dl[j + 1]);
      std::swap(du[j], dd[j + 1]);
      std::swap(du2[j], du[j + 1]);
      std::swap(b[j], b[j + 1]);
    }
    if (dd[j] == 0.0) dd[j] = 1e-300;
    const double mult = dl[j + 1] / dd[j];
    dd[j + 1] -= mult * du[j];
    du[j + 1] -= mult * du2[j];
    b[j + 1] -= mult * b[j];
  }
  if (dd[N - 1] == 0.0) dd[N - 1] = 1e-300;
  // Back substitution.
  std::vector<double> y(N);
  y[N - 1] = b[N - 1] / dd[N - 1];
  if (N >= 2) y[N - 2] = (b[N - 2] - du[N - 2] * y[N - 1]) / dd[N - 2];
  for (std::size_t j = N - 2; j-- > 0;)
    y[j] = (b[j] - du[j] * y[j + 1] - du2[j] * y[j + 2]) / dd[j];
  return y;
}

}  // namespace

Spectrum spectrum_fd(const BackgroundPtr& bg, std::size_t k) {
  if (!bg) throw ArgumentError("spectrum_fd requires a background");
  const Grid& g = bg->grid();
  const std::size_t N = g.n - 2;
  if (k < 1) throw ArgumentError("spectrum_fd requires k >= 1");
  if (k > N)
    throw ArgumentError("requested more eigenvalues than interior nodes");
  const SymTridiag t = discretize(*bg);

  // Gershgorin bracket for the whole spectrum.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < N; ++j) {
    double r = 0.0;
    if (j > 0) r += std::abs(t.e[j - 1]);
    if (j + 1 < N) r += std::abs(t.e[j]);
    lo = std::min(lo, t.d[j] - r);
    hi = std::max(hi, t.d[j] + r);
  }
  double max_e2 = 0.0;
  for (double e : t.e) max_e2 = std::max(max_e2, e * e);
  const double pivmin =
      std::numeric_limits<double>::min() * std::max(1.0, max_e2);

  Spectrum sp;
  sp.n = g.n;
  sp.h = g.h;
  for (std::size_t target = 1; target <= k; ++target) {
    double a = lo, b = hi;
    while (true) {
      const double mid = 0.5 * (a + b);
      const double width = b - a;
      if (width <= 1e-10 * std::max(1.0, std::abs(mid)) || mid == a ||
          mid == b) {
        sp.eigenvalues.push_back(mid);
        break;
      }
      if (count_below(t, mid, pivmin) >= target)
        b = mid;
      else
        a = mid;
    }
  }

  for (std::size_t idx = 0; idx < k; ++idx) {
    const double lambda = sp.eigenvalues[idx];
    std::vector<double> y(N);
    for (std::size_t j = 0; j < N; ++j)
      y[j] = ((j * 2654435761u) % 97) / 97.0 + 0.5;  // fixed seed vector
    for (int it = 0; it < 3; ++it) {
      y = shifted_solve(t, lambda, std::move(y));
      double norm = 0.0;
      for (double val : y) norm += val * val;
      norm = std::sqrt(norm);
      for (double& val : y) val /= norm;
    }
    // Map back (phi_i = y_i / sqrt(q_i)) and embed with Dirichlet zeros.
    std::vector<double> phi(g.n, 0.0);
    for (std::size_t j = 0; j < N; ++j)
      phi[j + 1] = y[j] / std::sqrt(bg->q[j + 1]);
    ScalarField f(bg->grid_ptr(), std::move(phi));
    const double nrm = weighted_norm(*bg, f);
    f = f / std::sqrt(nrm);
    // Deterministic sign: first significant interior value positive.
    const double scale = max_abs(f);
    for (std::size_t i = 1; i + 1 < g.n; ++i) {
      if (std::abs(f[i]) > 1e-8 * scale) {
        if (f[i] < 0.0) f = -f;
        break;
      }
    }
    sp.eigenfunctions.push_back(std::move(f));
  }
  return sp;
}

double weighted_norm(const Background& bg, const ScalarField& phi) {
  if (!same_grid(bg.grid(), phi.grid()))
    throw ArgumentError("weighted_norm requires a shared grid");
  const Grid& g = bg.grid();
  const std::size_t n = g.n;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = bg.q[i] * phi[i] * phi[i];
  const std::size_t intervals = n - 1;
  if (intervals % 2 == 0) {
    double s = f[0] + f[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * g.h / 3.0;
  }
  double s = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
  return s * g.h;
}

double equation_residual(const Background& bg, const ScalarField& phi,
                         double E) {
  if (!same_grid(bg.grid(), phi.grid()))
    throw ArgumentError("equation_residual requires a shared grid");
  const ScalarField flux = derive(phi, 1) / bg.m;
  const ScalarField r = -derive(flux, 1) + bg.v * phi - E * (bg.q * phi);
  const ScalarField drive = E * (bg.q * phi);
  const std::size_t n = phi.size();
  double num = 0.0, scale = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    num = std::max(num, std::abs(r[i]));
    scale = std::max(scale, std::abs(drive[i]));
  }
  return num / (1.0 + scale);
}

}  // namespace darboux
