#include "rlab/implant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlab/grid.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

double ProductField4D::operator()(Point4 x) const {
  double acc = 0.0;
  for (const auto& t : terms) {
    const double a = t.a({x.q1, x.p1});
    if (a != 0.0) acc += a * t.b({x.q2, x.p2});
  }
  return acc;
}

double product_sup(const ProductField4D& f, int n1, int n2) {
  const Domain square = Domain::unit_square();
  std::vector<GridSample> as;
  std::vector<GridSample> bs;
  for (const auto& t : f.terms) {
    as.push_back(sample(t.a, n1, square));
    bs.push_back(sample(t.b, n2, square));
  }
  const std::size_t s1 = static_cast<std::size_t>(n1) * n1;
  const std::size_t s2 = static_cast<std::size_t>(n2) * n2;
  std::vector<double> row_sup(s1, 0.0);
  parallel_for(s1, [&](std::size_t i) {
    std::vector<double> row(s2, 0.0);
    for (std::size_t k = 0; k < as.size(); ++k) {
      const double ai = as[k].values[i];
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < s2; ++j) row[j] += ai * bs[k].values[j];
    }
    double m = 0.0;
    for (double v : row) m = std::max(m, std::abs(v));
    row_sup[i] = m;
  });
  return f.terms.empty() ? 0.0 : *std::max_element(row_sup.begin(), row_sup.end());
}

bool vanishes_outside_unit_square(const FieldExpr& f, double tol) {
  constexpr int kN = 81;
  const Domain box = Domain::chart(-0.5, 1.5, -0.5, 1.5);
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j < kN; ++j) {
      const Point2 x = box.node(i, j, kN);
      const bool inside = x.q > 0.0 && x.q < 1.0 && x.p > 0.0 && x.p < 1.0;
      if (!inside && std::abs(f(x)) > tol) return false;
    }
  }
  return true;
}

ProductField4D chi_product(const FieldExpr& chi, const FieldExpr& l) {
  if (!vanishes_outside_unit_square(chi)) throw std::invalid_argument("chi_product: chi is not supported in the cube");
  if (!vanishes_outside_unit_square(l)) throw std::invalid_argument("chi_product: L is not supported in the square");
  return {{{chi, l}}};
}

ProductField4D poisson4(const ProductField4D& a, const ProductField4D& b) {
  ProductField4D out;
  for (const auto& s : a.terms) {
    for (const auto& t : b.terms) {
      out.terms.push_back({poisson(s.a, t.a), s.b * t.b});
      out.terms.push_back({s.a * t.a, poisson(s.b, t.b)});
    }
  }
  return out;
}

ProductField4D operator+(const ProductField4D& a, const ProductField4D& b) {
  ProductField4D out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

ProductField4D operator*(double c, const ProductField4D& f) {
  ProductField4D out = f;
  for (auto& t : out.terms) t.a = c * t.a;
  return out;
}

FieldExpr default_chi() {
  return FieldExpr::bump(Var::q, 0.5, 0.2, 0.35, false) * FieldExpr::bump(Var::p, 0.5, 0.2, 0.35, false);
}

std::array<FieldExpr, 3> default_seed_triple() {
  const FieldExpr plateau =
      FieldExpr::bump(Var::q, 0.5, 0.25, 0.4, false) * FieldExpr::bump(Var::p, 0.5, 0.25, 0.4, false);
  constexpr double kAmp = 0.05;
  return {plateau * (kAmp * FieldExpr::trig(1, 0, Phase::sin)),
          plateau * (kAmp * FieldExpr::trig(0, 1, Phase::sin)),
          plateau * (kAmp * FieldExpr::trig(1, 1, Phase::cos))};
}

namespace {

ProductField4D implanted_triple(const FieldExpr& chi, const FieldExpr& f, const FieldExpr& g, const FieldExpr& h) {
  return poisson4(chi_product(chi, f), poisson4(chi_product(chi, g), chi_product(chi, h)));
}

}  // namespace

Theorem3Report theorem3_demo(const FieldExpr& f1, const FieldExpr& g1, const FieldExpr& h1, double delta,
                             const Theorem3Options& opt) {
  if (!(delta > 0.0)) throw std::invalid_argument("theorem3_demo: delta must be > 0");
  const Domain square = Domain::unit_square();
  Theorem3Report r;
  r.delta = delta;
  const GridSample seed = sample(triple_bracket(f1, g1, h1), opt.plane2_n, square);
  r.seed_triple_sup = std::max(seed.max(), -seed.min());
  if (!(r.seed_triple_sup > 0.0)) {
    throw std::invalid_argument("theorem3_demo: the seed triple bracket vanishes on the lattice");
  }
  const FieldExpr chi = default_chi();
  const GridSample chi_grid = sample(chi, opt.plane1_n, square);
  for (double v : chi_grid.values) {
    r.chi_sup = std::max(r.chi_sup, std::abs(v));
    r.chi_cubed_sup = std::max(r.chi_cubed_sup, std::abs(v * v * v));
  }
  r.unperturbed_sup = product_sup(implanted_triple(chi, f1, g1, h1), opt.plane1_n, opt.plane2_n);

  // Smallest m whose tamed seeds are within delta and still vanish outside the square.
  TamedTriple t;
  for (int m = std::max(1, opt.m_start); m <= opt.m_max; ++m) {
    t = square_tame_triple(f1, g1, h1, m);
    const bool supported = std::all_of(t.fields.begin(), t.fields.end(),
                                       [](const FieldExpr& f) { return vanishes_outside_unit_square(f); });
    const double worst = *std::max_element(t.c0_errors.begin(), t.c0_errors.end());
    if (supported && worst <= delta) {
      r.tamed_within_delta = true;
      break;
    }
  }
  r.m = t.m;
  r.c0_errors = t.c0_errors;
  r.perturbed_sup =
      product_sup(implanted_triple(chi, t.fields[0], t.fields[1], t.fields[2]), opt.plane1_n, opt.plane2_n);
  const std::array<FieldExpr, 3> seeds = {f1, g1, h1};
  for (int k = 0; k < 3; ++k) {
    const ProductField4D diff = chi_product(chi, seeds[k]) + (-1.0) * chi_product(chi, t.fields[k]);
    r.implant_dists[k] = product_sup(diff, opt.plane1_n, opt.plane2_n);
  }
  return r;
}

}  // namespace rlab
