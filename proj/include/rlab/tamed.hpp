#pragma once

#include <array>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// Pairwise disjoint closed squares of side 2c with centers on a 3c lattice.
/// Torus: centers (3ic + offset_q, 3jc + offset_p) mod 1 for 0 <= i, j < m, c = 1/(3m).
/// Chart (unit square): the same lattice for -1 <= i, j <= m, so that the squares
/// reach past every edge; nothing wraps.
struct ThickGrid {
  int m = 1;
  double c = 1.0 / 3.0;
  Point2 offset;
  bool periodic = true;

  std::vector<Point2> centers() const;
  /// True when x lies in the closed square enlarged by `margin` around some center.
  bool contains(Point2 x, double margin = 0.0) const;
  /// Distance from x to the nearest center in the max norm (periodic on the torus).
  double center_distance(Point2 x) const;
};

ThickGrid thick_grid(int m, Point2 offset, bool periodic = true);

/// The three diagonally shifted grids with offsets (0,0), (c,c), (2c,2c).
std::array<ThickGrid, 3> build_cover(int m, bool periodic = true);

/// Product of two plateaus: 1 on the (eta/2)-enlarged square around `center`,
/// 0 outside its eta-enlargement.
FieldExpr square_plateau(const ThickGrid& grid, Point2 center, double eta);

/// f' = f + sum_i beta_i (f(center_i) - f). Constant on the eta/2-enlargement
/// of every square; equal to f away from the eta-enlargements.
/// Requires 0 < eta < c/4.
FieldExpr tame(const FieldExpr& f, const ThickGrid& grid, double eta);

/// sup |tame(f) - f| measured square by square on local lattices with refinement.
/// The blends of distinct squares of one grid never overlap, so this is the
/// global C0 distance.
double taming_error(const FieldExpr& f, const FieldExpr& tamed, const ThickGrid& grid, double eta,
                    int local_n = 24, int refine_iters = 10);

struct TamedTriple {
  std::array<FieldExpr, 3> fields;
  std::array<ThickGrid, 3> grids;
  std::array<double, 3> c0_errors{};
  double eta = 0.0;
  int m = 0;
};

/// eta <= 0 selects the default c/8.
TamedTriple tame_triple(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, int m, double eta = 0.0);
/// Same construction on the unit square with non-wrapping plateaus; the inputs
/// should vanish near the boundary.
TamedTriple square_tame_triple(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, int m,
                               double eta = 0.0);

/// {F'_1, {F'_2, F'_3}} as a tree.
FieldExpr triple_bracket(const TamedTriple& t);
FieldExpr triple_bracket(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3);

struct TripleCheck {
  double sup = 0.0;
  /// Lattice points where none of the three fields has an exactly zero gradient.
  long unlocked_points = 0;
  int n = 0;
};

/// Scans the triple bracket of the tamed fields on an n x n lattice of their domain.
TripleCheck check_triple(const TamedTriple& t, int n = 512);

struct TameSearch {
  TamedTriple triple;
  bool reached = false;
  std::vector<int> m_tried;
  std::vector<double> max_error;  // worst of the three errors for each m tried
};

/// Increases m from m_start to m_max until every C0 error is <= epsilon.
TameSearch tame_to_epsilon(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, double epsilon,
                           int m_max = 12, bool periodic = true, int m_start = 1);

}  // namespace rlab
