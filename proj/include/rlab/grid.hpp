#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// Values of a field on an n x n lattice, values[i * n + j] at domain.node(i, j, n).
struct GridSample {
  int n = 0;
  Domain domain;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
  Point2 point(int i, int j) const { return domain.node(i, j, n); }
  double min() const;
  double max() const;
  /// Pairwise-summed mean; the plain lattice average on the torus.
  double mean() const;
};

using PointFunction = std::function<double(Point2)>;

GridSample sample(const FieldExpr& f, int n, const Domain& domain = Domain::torus());
GridSample sample(const PointFunction& f, int n, const Domain& domain = Domain::torus());

/// Sum in a fixed pairwise order (deterministic, low roundoff).
double pairwise_sum(std::span<const double> values);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  Point2 argmin;
  Point2 argmax;
  double grid_min = 0.0;
  double grid_max = 0.0;
  /// grid_max + Lip * sqrt(2) / (2n) when a Lipschitz bound is known.
  std::optional<double> max_upper;
  std::optional<double> min_lower;
};

/// Grid scan followed by refine_iters rounds of golden-section line searches
/// around the best lattice nodes. Refinement only ever improves on the grid value.
Extrema extrema(const FieldExpr& f, int n, int refine_iters, const Domain& domain = Domain::torus());
Extrema extrema(const PointFunction& f, int n, int refine_iters, const Domain& domain = Domain::torus());

struct Maximum {
  double value = 0.0;
  Point2 at;
  double grid_value = 0.0;
};

/// Refined maximum only (half the work of extrema).
Maximum maximize(const PointFunction& f, int n, int refine_iters, const Domain& domain = Domain::torus());
/// Refined maximum seeded from an already sampled lattice of f.
Maximum maximize(const GridSample& grid, const PointFunction& f, int refine_iters);

/// Local golden-section refinement of a maximum starting at `start`;
/// `radius` is the initial search half-width.
Point2 refine_max(const PointFunction& f, Point2 start, double radius, int iters, const Domain& domain);

/// f minus its lattice mean at resolution n (exact for trig fields when n > 2 * max mode).
FieldExpr normalize(const FieldExpr& f, int n = 64);
double mean(const FieldExpr& f, int n = 64);

/// C0 distance: max |f - g| by grid scan plus refinement.
double sup_dist(const FieldExpr& f, const FieldExpr& g, int n, int refine_iters,
                const Domain& domain = Domain::torus());

/// Recursive sup and Lipschitz bounds of a tree over the domain.
struct FieldBounds {
  double sup = 0.0;
  double lipschitz = 0.0;
};
FieldBounds propagate_bounds(const FieldExpr& f, const Domain& domain = Domain::torus());

}  // namespace rlab
