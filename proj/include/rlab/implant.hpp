#pragma once

#include <array>
#include <vector>

#include "rlab/field.hpp"
#include "rlab/tamed.hpp"

namespace rlab {

/// A point of the 4D chart: plane 1 is (q1, p1), plane 2 is (q2, p2).
struct Point4 {
  double q1 = 0.0;
  double p1 = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;
};

struct ProductTerm {
  FieldExpr a;  // function of (q1, p1)
  FieldExpr b;  // function of (q2, p2)
};

/// Sum of separable terms a_k(q1, p1) b_k(q2, p2). Never sampled on a 4D grid.
struct ProductField4D {
  std::vector<ProductTerm> terms;

  double operator()(Point4 x) const;
};

/// Lattice sup of |f| over the product of an n1 x n1 and an n2 x n2 unit-square
/// lattice, computed from per-plane samples of each term.
double product_sup(const ProductField4D& f, int n1, int n2);

/// chi(q1, p1) L(q2, p2). Both factors must vanish outside the unit square;
/// this is checked on a lattice around it (tolerance 1e-12).
ProductField4D chi_product(const FieldExpr& chi, const FieldExpr& l);

/// {A, B} = sum over term pairs of {a, a'}_1 (b b') + (a a') {b, b'}_2.
ProductField4D poisson4(const ProductField4D& a, const ProductField4D& b);

ProductField4D operator+(const ProductField4D& a, const ProductField4D& b);
ProductField4D operator*(double c, const ProductField4D& f);

/// Plateau cutoff on the plane-1 unit square: 1 on [0.3, 0.7]^2, 0 outside [0.15, 0.85]^2.
FieldExpr default_chi();

/// True when |f| <= tol at every node of a lattice on [-0.5, 1.5]^2 outside (0, 1)^2.
bool vanishes_outside_unit_square(const FieldExpr& f, double tol = 1e-12);

struct Theorem3Options {
  int plane1_n = 48;
  int plane2_n = 96;
  int m_start = 1;
  int m_max = 40;
};

struct Theorem3Report {
  double delta = 0.0;
  double seed_triple_sup = 0.0;   // lattice sup |{F1, {G1, H1}}| on the unit square
  double chi_cubed_sup = 0.0;     // lattice sup |chi|^3 on plane 1
  double chi_sup = 0.0;
  double unperturbed_sup = 0.0;   // lattice sup of the 4D triple bracket
  double perturbed_sup = 0.0;     // same for the tamed triple
  std::array<double, 3> c0_errors{};     // plane-2 taming errors
  std::array<double, 3> implant_dists{};  // lattice sup |chi F - chi F'|
  int m = 0;
  bool tamed_within_delta = false;
};

/// Implants the seed triple into the 4D chart through chi and compares the
/// triple bracket before and after taming the seeds on the square.
/// Throws std::invalid_argument if the seed triple bracket vanishes on the lattice.
Theorem3Report theorem3_demo(const FieldExpr& f1, const FieldExpr& g1, const FieldExpr& h1, double delta,
                             const Theorem3Options& options = {});

/// The default seed triple: small bump-localized trig fields on the unit square.
std::array<FieldExpr, 3> default_seed_triple();

}  // namespace rlab
