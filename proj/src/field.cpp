#include "darboux/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace darboux {

namespace {

void check_finite(const std::vector<double>& v, const char* what,
                  const Grid& grid) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << what << " is non-finite at node " << i << " (x = " << grid.x[i]
         << ")";
      throw SamplingError(os.str());
    }
  }
}

void require_same_grid(const ScalarField& f, const ScalarField& g) {
  if (!same_grid(f.grid(), g.grid()))
    throw ArgumentError("fields live on different grids");
}

int common_depth(const ScalarField& f, const ScalarField& g) {
  return std::min(f.depth(), g.depth());
}

}  // namespace

GridPtr make_grid(double x_min, double x_max, std::size_t n) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max))
    throw ArgumentError("grid endpoints must be finite");
  if (!(x_min < x_max))
    throw ArgumentError("grid requires x_min < x_max");
  if (n < 16) throw ArgumentError("grid requires at least 16 nodes");
  auto g = std::make_shared<Grid>();
  g->x_min = x_min;
  g->x_max = x_max;
  g->n = n;
  g->h = (x_max - x_min) / static_cast<double>(n - 1);
  g->x.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g->x[i] = x_min + static_cast<double>(i) * g->h;
  g->x[n - 1] = x_max;  // guard the last node against accumulated rounding
  return g;
}

bool same_grid(const Grid& a, const Grid& b) {
  if (&a == &b) return true;
  return a.n == b.n && a.x_min == b.x_min && a.x_max == b.x_max;
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ArgumentError("field requires a grid");
  if (values_.size() != grid_->n)
    throw ArgumentError("field value count does not match grid size");
  check_finite(values_, "field value", *grid_);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values,
                         std::vector<std::vector<double>> derivative_rows)
    : ScalarField(std::move(grid), std::move(values)) {
  if (derivative_rows.size() > static_cast<std::size_t>(max_depth))
    derivative_rows.resize(max_depth);
  for (const auto& row : derivative_rows) {
    if (row.size() != grid_->n)
      throw ArgumentError("derivative row size does not match grid size");
    check_finite(row, "derivative row entry", *grid_);
  }
  rows_ = std::move(derivative_rows);
}

const std::vector<double>& ScalarField::derivative_row(int k) const {
  if (k < 1 || k > depth())
    throw ArgumentError("requested derivative row is not carried");
  return rows_[static_cast<std::size_t>(k - 1)];
}

ScalarField ScalarField::values_only() const {
  return ScalarField(grid_, values_);
}

ScalarField sample(const GridPtr& grid,
                   const std::function<double(double)>& f) {
  if (!grid) throw ArgumentError("sample requires a grid");
  std::vector<double> v(grid->n);
  for (std::size_t i = 0; i < grid->n; ++i) {
    v[i] = f(grid->x[i]);
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "sampled function is non-finite at node " << i
         << " (x = " << grid->x[i] << ")";
      throw SamplingError(os.str());
    }
  }
  return ScalarField(grid, std::move(v));
}

ScalarField sample(
    const GridPtr& grid, const std::function<double(double)>& f,
    const std::vector<std::function<double(double)>>& derivatives) {
  ScalarField base = sample(grid, f);
  std::vector<std::vector<double>> rows;
  rows.reserve(derivatives.size());
  for (std::size_t k = 0; k < derivatives.size() &&
                          k < static_cast<std::size_t>(ScalarField::max_depth);
       ++k) {
    std::vector<double> row(grid->n);
    for (std::size_t i = 0; i < grid->n; ++i) {
      row[i] = derivatives[k](grid->x[i]);
      if (!std::isfinite(row[i])) {
        std::ostringstream os;
        os << "sampled derivative of order " << (k + 1)
           << " is non-finite at node " << i << " (x = " << grid->x[i] << ")";
        throw SamplingError(os.str());
      }
    }
    rows.push_back(std::move(row));
  }
  return ScalarField(grid, base.values(), std::move(rows));
}

ScalarField constant_field(const GridPtr& grid, double c) {
  if (!grid) throw ArgumentError("constant_field requires a grid");
  if (!std::isfinite(c)) throw ArgumentError("constant must be finite");
  std::vector<double> v(grid->n, c);
  std::vector<std::vector<double>> rows(
      ScalarField::max_depth, std::vector<double>(grid->n, 0.0));
  return ScalarField(grid, std::move(v), std::move(rows));
}

namespace {

// Gather value + rows into jet[0..depth] per node for recurrence-based ops.
struct JetView {
  const ScalarField* f;
  double at(int k, std::size_t i) const {
    return k == 0 ? (*f)[i] : f->derivative_row(k)[i];
  }
};

ScalarField from_jets(const GridPtr& grid,
                      std::vector<std::vector<double>> jet_rows) {
  // jet_rows[k] is the k-th derivative row (k = 0 gives values).
  std::vector<double> values = std::move(jet_rows[0]);
  std::vector<std::vector<double>> rows(jet_rows.begin() + 1, jet_rows.end());
  return ScalarField(grid, std::move(values), std::move(rows));
}

}  // namespace

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const int d = common_depth(f, g);
  const std::size_t n = f.size();
  JetView F{&f}, G{&g};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  for (int k = 0; k <= d; ++k)
    for (std::size_t i = 0; i < n; ++i) out[k][i] = F.at(k, i) + G.at(k, i);
  return from_jets(f.grid_ptr(), std::move(out));
}

ScalarField operator-(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const int d = common_depth(f, g);
  const std::size_t n = f.size();
  JetView F{&f}, G{&g};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  for (int k = 0; k <= d; ++k)
    for (std::size_t i = 0; i < n; ++i) out[k][i] = F.at(k, i) - G.at(k, i);
  return from_jets(f.grid_ptr(), std::move(out));
}

ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const int d = common_depth(f, g);
  const std::size_t n = f.size();
  JetView F{&f}, G{&g};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  static const double binom[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int k = 0; k <= d; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j)
        s += binom[k][j] * F.at(j, i) * G.at(k - j, i);
      out[k][i] = s;
    }
  return from_jets(f.grid_ptr(), std::move(out));
}

ScalarField operator/(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const int d = common_depth(f, g);
  const std::size_t n = f.size();
  JetView F{&f}, G{&g};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double g0 = G.at(0, i);
    if (g0 == 0.0) {
      std::ostringstream os;
      os << "division by zero at node " << i << " (x = " << f.grid().x[i]
         << ")";
      throw std::domain_error(os.str());
    }
    // h = f/g: f^(k) = sum_j C(k,j) h^(j) g^(k-j), solved for h^(k).
    const double h0 = F.at(0, i) / g0;
    out[0][i] = h0;
    if (d >= 1) out[1][i] = (F.at(1, i) - h0 * G.at(1, i)) / g0;
    if (d >= 2)
      out[2][i] =
          (F.at(2, i) - 2.0 * out[1][i] * G.at(1, i) - h0 * G.at(2, i)) / g0;
    if (d >= 3)
      out[3][i] = (F.at(3, i) - 3.0 * out[2][i] * G.at(1, i) -
                   3.0 * out[1][i] * G.at(2, i) - h0 * G.at(3, i)) /
                  g0;
  }
  return from_jets(f.grid_ptr(), std::move(out));
}

ScalarField operator-(const ScalarField& f) {
  const int d = f.depth();
  const std::size_t n = f.size();
  JetView F{&f};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  for (int k = 0; k <= d; ++k)
    for (std::size_t i = 0; i < n; ++i) out[k][i] = -F.at(k, i);
  return from_jets(f.grid_ptr(), std::move(out));
}

ScalarField operator+(const ScalarField& f, double c) {
  return f + constant_field(f.grid_ptr(), c);
}
ScalarField operator+(double c, const ScalarField& f) { return f + c; }
ScalarField operator-(const ScalarField& f, double c) {
  return f - constant_field(f.grid_ptr(), c);
}
ScalarField operator-(double c, const ScalarField& f) {
  return constant_field(f.grid_ptr(), c) - f;
}
ScalarField operator*(const ScalarField& f, double c) {
  return f * constant_field(f.grid_ptr(), c);
}
ScalarField operator*(double c, const ScalarField& f) { return f * c; }
ScalarField operator/(const ScalarField& f, double c) {
  return f / constant_field(f.grid_ptr(), c);
}
ScalarField operator/(double c, const ScalarField& f) {
  return constant_field(f.grid_ptr(), c) / f;
}

ScalarField sqrt_field(const ScalarField& f) {
  const int d = f.depth();
  const std::size_t n = f.size();
  JetView F{&f};
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d) + 1,
                                       std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double f0 = F.at(0, i);
    if (!(f0 > 0.0)) {
      std::ostringstream os;
      os << "sqrt_field requires strictly positive values; violated at node "
         << i << " (x = " << f.grid().x[i] << ", value = " << f0 << ")";
      throw std::domain_error(os.str());
    }
    // s = sqrt(f): differentiate s^2 = f repeatedly.
    const double s0 = std::sqrt(f0);
    out[0][i] = s0;
    if (d >= 1) out[1][i] = F.at(1, i) / (2.0 * s0);
    if (d >= 2)
      out[2][i] = (F.at(2, i) - 2.0 * out[1][i] * out[1][i]) / (2.0 * s0);
    if (d >= 3)
      out[3][i] = (F.at(3, i) - 6.0 * out[1][i] * out[2][i]) / (2.0 * s0);
  }
  return from_jets(f.grid_ptr(), std::move(out));
}

namespace {

std::vector<double> fd_derivative(const std::vector<double>& v, double h) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return out;
}

std::vector<double> fd_second_derivative(const std::vector<double>& v,
                                         double h) {
  const std::size_t n = v.size();
  const double h2 = h * h;
  std::vector<double> out(n);
  out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
  out[n - 1] =
      (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
  return out;
}

}  // namespace

ScalarField derive(const ScalarField& f, int order) {
  if (order != 1 && order != 2)
    throw ArgumentError("derive supports orders 1 and 2 only");
  const Grid& grid = f.grid();
  if (f.depth() >= order) {
    // Carried rows are authoritative: shift the jet down by `order`.
    std::vector<double> values = f.derivative_row(order);
    std::vector<std::vector<double>> rows;
    for (int k = order + 1; k <= f.depth(); ++k)
      rows.push_back(f.derivative_row(k));
    return ScalarField(f.grid_ptr(), std::move(values), std::move(rows));
  }
  if (f.depth() == 1 && order == 2) {
    // One analytic derivative available: differentiate that row numerically.
    return ScalarField(f.grid_ptr(),
                       fd_derivative(f.derivative_row(1), grid.h));
  }
  if (order == 1)
    return ScalarField(f.grid_ptr(), fd_derivative(f.values(), grid.h));
  return ScalarField(f.grid_ptr(), fd_second_derivative(f.values(), grid.h));
}

std::size_t nearest_node(const Grid& grid, double x) {
  if (!std::isfinite(x)) throw ArgumentError("node lookup requires finite x");
  const double t = (x - grid.x_min) / grid.h;
  const double r = std::round(t);
  if (r < -0.5 || r > static_cast<double>(grid.n - 1) + 0.5)
    throw ArgumentError("point lies outside the grid");
  const std::size_t i =
      static_cast<std::size_t>(std::clamp(r, 0.0, double(grid.n - 1)));
  return i;
}

ScalarField integrate_cumulative(const ScalarField& f, double x0) {
  const Grid& grid = f.grid();
  const std::size_t i0 = nearest_node(grid, x0);
  const std::size_t n = grid.n;
  const double h = grid.h;
  std::vector<double> F(n);
  F[i0] = 0.0;
  for (std::size_t i = i0 + 1; i < n; ++i)
    F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  for (std::size_t i = i0; i-- > 0;)
    F[i] = F[i + 1] - 0.5 * h * (f[i] + f[i + 1]);
  // The integrand and its carried derivatives become the integral's rows:
  // F' = f exactly, so the fundamental-theorem round trip holds bit-for-bit.
  std::vector<std::vector<double>> rows;
  rows.push_back(f.values());
  for (int k = 1; k <= f.depth() && k < ScalarField::max_depth; ++k)
    rows.push_back(f.derivative_row(k));
  return ScalarField(f.grid_ptr(), std::move(F), std::move(rows));
}

ScalarField wronskian(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const ScalarField fp = derive(f, 1);
  const ScalarField gp = derive(g, 1);
  const std::size_t n = f.size();
  std::vector<double> w(n);
  // One shared rounding path for (f,g) and (g,f) keeps the Wronskian exactly
  // antisymmetric in IEEE arithmetic.
  for (std::size_t i = 0; i < n; ++i) w[i] = f[i] * gp[i] - fp[i] * g[i];
  return ScalarField(f.grid_ptr(), std::move(w));
}

ScalarField three_wronskian(const ScalarField& u1, const ScalarField& u2,
                            const ScalarField& u3) {
  require_same_grid(u1, u2);
  require_same_grid(u1, u3);
  const ScalarField d1 = derive(u1, 1), d2 = derive(u2, 1), d3 = derive(u3, 1);
  const ScalarField s1 = derive(u1, 2), s2 = derive(u2, 2), s3 = derive(u3, 2);
  const std::size_t n = u1.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u1[i], b = u2[i], c = u3[i];
    const double ap = d1[i], bp = d2[i], cp = d3[i];
    const double as = s1[i], bs = s2[i], cs = s3[i];
    w[i] = a * (bp * cs - bs * cp) - b * (ap * cs - as * cp) +
           c * (ap * bs - as * bp);
  }
  return ScalarField(u1.grid_ptr(), std::move(w));
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

double interior_max_abs(const ScalarField& f, std::size_t margin) {
  const std::size_t n = f.size();
  if (2 * margin >= n) throw ArgumentError("margin swallows the whole grid");
  double m = 0.0;
  for (std::size_t i = margin; i + margin < n; ++i)
    m = std::max(m, std::abs(f[i]));
  return m;
}

double relative_interior_error(const ScalarField& a, const ScalarField& b,
                               std::size_t margin) {
  require_same_grid(a, b);
  const std::size_t n = a.size();
  if (2 * margin >= n) throw ArgumentError("margin swallows the whole grid");
  double m = 0.0;
  for (std::size_t i = margin; i + margin < n; ++i)
    m = std::max(m, std::abs(a[i] - b[i]) / (1.0 + std::abs(b[i])));
  return m;
}

}  // namespace darboux
