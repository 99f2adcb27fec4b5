#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {

/// Uniform one-dimensional grid. All fields, solutions, and potentials in the
/// library live on a shared grid; operations across different grids are
/// rejected.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;       ///< number of nodes (>= 16)
  double h = 0.0;          ///< node spacing, (x_max - x_min) / (n - 1)
  std::vector<double> x;   ///< nodes, strictly increasing, x[0] = x_min
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a uniform grid. Throws ArgumentError unless x_min < x_max (both
/// finite) and n >= 16.
GridPtr make_grid(double x_min, double x_max, std::size_t n);

/// True when two fields may be combined: same grid object or identical
/// (x_min, x_max, n).
bool same_grid(const Grid& a, const Grid& b);

/// Sampled real scalar function on a grid. A field optionally carries
/// "derivative rows": sampled values of its first few derivatives
/// (row k = d^k f / dx^k at every node, k = 1..depth). Rows are produced by
/// closed-form samplers and by the equation-based jet extension in the solver
/// module, and are propagated through arithmetic exactly (Leibniz/quotient/
/// square-root recurrences), so that differentiating an analytic expression
/// never falls back to finite differences. Fields are immutable.
class ScalarField {
 public:
  /// Deepest derivative row carried through arithmetic.
  static constexpr int max_depth = 3;

  ScalarField() = default;

  /// Values only (depth 0). Throws ArgumentError on size mismatch,
  /// SamplingError on non-finite entries.
  ScalarField(GridPtr grid, std::vector<double> values);

  /// Values plus derivative rows (rows[k-1][i] = k-th derivative at node i).
  /// At most max_depth rows are kept; extras are discarded.
  ScalarField(GridPtr grid, std::vector<double> values,
              std::vector<std::vector<double>> derivative_rows);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Number of derivative rows carried (0 = sampled values only).
  int depth() const { return static_cast<int>(rows_.size()); }

  /// Sampled k-th derivative, k in [1, depth()].
  const std::vector<double>& derivative_row(int k) const;

  /// Copy of this field with all derivative rows dropped, for forcing the
  /// finite-difference code paths.
  ScalarField values_only() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::vector<std::vector<double>> rows_;
};

/// Sample a callable on a grid (depth 0). Throws SamplingError, naming the
/// node, if f is non-finite anywhere.
ScalarField sample(const GridPtr& grid, const std::function<double(double)>& f);

/// Sample a callable together with its derivatives; derivatives[k-1] samples
/// the k-th derivative. Pass 1 to ScalarField::max_depth entries.
ScalarField sample(const GridPtr& grid, const std::function<double(double)>& f,
                   const std::vector<std::function<double(double)>>& derivatives);

/// Constant field carrying zero derivative rows to full depth, so constants
/// never truncate jet arithmetic.
ScalarField constant_field(const GridPtr& grid, double c);

// Pointwise arithmetic. Derivative rows propagate to the smaller depth of the
// two operands. Grid mismatch throws ArgumentError; division by an exact zero
// value throws std::domain_error naming the node.
ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(const ScalarField& f, const ScalarField& g);
ScalarField operator/(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f);
ScalarField operator+(const ScalarField& f, double c);
ScalarField operator+(double c, const ScalarField& f);
ScalarField operator-(const ScalarField& f, double c);
ScalarField operator-(double c, const ScalarField& f);
ScalarField operator*(const ScalarField& f, double c);
ScalarField operator*(double c, const ScalarField& f);
ScalarField operator/(const ScalarField& f, double c);
ScalarField operator/(double c, const ScalarField& f);

/// Pointwise square root with jet propagation. Requires strictly positive
/// values; throws std::domain_error otherwise.
ScalarField sqrt_field(const ScalarField& f);

/// Derivative of a field, order 1 or 2. Uses carried derivative rows verbatim
/// when present; otherwise central second-order stencils on the interior and
/// one-sided second-order stencils at the two boundary nodes.
ScalarField derive(const ScalarField& f, int order = 1);

/// Cumulative integral F(x) = integral from x0 to x of f, by the composite
/// trapezoid rule along the grid. x0 must lie within the grid (it is snapped
/// to the nearest node); F(x0) = 0 and F is negative left of x0 for positive
/// f. The result carries [f, f', f'', ...] as its derivative rows, so the
/// fundamental-theorem round trip derive(integrate_cumulative(f)) is exact
/// when rows are used.
ScalarField integrate_cumulative(const ScalarField& f, double x0);

/// Wronskian W = f g' - f' g, derivatives via derive(). Antisymmetric
/// bit-for-bit: wronskian(f, g) and -wronskian(g, f) share one rounding path.
ScalarField wronskian(const ScalarField& f, const ScalarField& g);

/// Third-order Wronskian det [[u1,u2,u3],[u1',u2',u3'],[u1'',u2'',u3'']],
/// derivatives via derive().
ScalarField three_wronskian(const ScalarField& u1, const ScalarField& u2,
                            const ScalarField& u3);

/// Max |f| over all nodes.
double max_abs(const ScalarField& f);

/// Max |f| over interior nodes, excluding `margin` nodes on each side.
double interior_max_abs(const ScalarField& f, std::size_t margin = 2);

/// Max over interior nodes (excluding `margin` per side) of
/// |a - b| / (1 + |b|): the relative-deviation measure used by the
/// verification suites.
double relative_interior_error(const ScalarField& a, const ScalarField& b,
                               std::size_t margin = 2);

/// Index of the grid node nearest to x; throws ArgumentError when x lies
/// outside [x_min, x_max] by more than half a step.
std::size_t nearest_node(const Grid& grid, double x);

}  // namespace darboux
