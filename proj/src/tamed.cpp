#include "rlab/tamed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rlab/compiled.hpp"
#include "rlab/grid.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

namespace {

// Distance from x to the nearest lattice coordinate 3ic + offset.
double axis_distance(const ThickGrid& g, double x, double offset) {
  const double mesh = 3.0 * g.c;
  double k = std::round((x - offset) / mesh);
  if (!g.periodic) k = std::clamp(k, -1.0, double(g.m));
  return std::abs(x - offset - k * mesh);
}

std::vector<double> axis_centers(const ThickGrid& g, double offset) {
  std::vector<double> out;
  const int lo = g.periodic ? 0 : -1;
  const int hi = g.periodic ? g.m - 1 : g.m;
  for (int i = lo; i <= hi; ++i) {
    double v = 3.0 * i * g.c + offset;
    if (g.periodic) v -= std::floor(v);
    out.push_back(v);
  }
  return out;
}

Domain grid_domain(const ThickGrid& g) { return g.periodic ? Domain::torus() : Domain::unit_square(); }

}  // namespace

ThickGrid thick_grid(int m, Point2 offset, bool periodic) {
  if (m < 1) throw std::invalid_argument("thick grid: m must be >= 1");
  return {m, 1.0 / (3.0 * m), offset, periodic};
}

std::vector<Point2> ThickGrid::centers() const {
  std::vector<Point2> out;
  for (double q : axis_centers(*this, offset.q)) {
    for (double p : axis_centers(*this, offset.p)) out.push_back({q, p});
  }
  return out;
}

double ThickGrid::center_distance(Point2 x) const {
  return std::max(axis_distance(*this, x.q, offset.q), axis_distance(*this, x.p, offset.p));
}

bool ThickGrid::contains(Point2 x, double margin) const { return center_distance(x) <= c + margin; }

std::array<ThickGrid, 3> build_cover(int m, bool periodic) {
  const double c = 1.0 / (3.0 * m);
  return {thick_grid(m, {0.0, 0.0}, periodic), thick_grid(m, {c, c}, periodic),
          thick_grid(m, {2.0 * c, 2.0 * c}, periodic)};
}

FieldExpr square_plateau(const ThickGrid& g, Point2 center, double eta) {
  return FieldExpr::bump(Var::q, center.q, g.c + eta / 2.0, g.c + eta, g.periodic) *
         FieldExpr::bump(Var::p, center.p, g.c + eta / 2.0, g.c + eta, g.periodic);
}

FieldExpr tame(const FieldExpr& f, const ThickGrid& g, double eta) {
  if (!(eta > 0.0 && eta < g.c / 4.0)) throw std::invalid_argument("tame: eta must lie in (0, c/4)");
  if (f.kind() == FieldExpr::Kind::constant) return f;
  const auto qs = axis_centers(g, g.offset.q);
  const auto ps = axis_centers(g, g.offset.p);
  std::vector<FieldExpr> a;
  std::vector<FieldExpr> b;
  for (double q : qs) a.push_back(FieldExpr::bump(Var::q, q, g.c + eta / 2.0, g.c + eta, g.periodic));
  for (double p : ps) b.push_back(FieldExpr::bump(Var::p, p, g.c + eta / 2.0, g.c + eta, g.periodic));
  // f (1 - A(q) B(p)) + sum_ij f(c_ij) a_i(q) b_j(p), where A = sum a_i, B = sum b_j.
  const FieldExpr cover = FieldExpr::sum(a) * FieldExpr::sum(b);
  std::vector<FieldExpr> terms = {FieldExpr::product(FieldExpr::constant(1.0) - cover, f)};
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double v = f({qs[i], ps[j]});
      if (v != 0.0) terms.push_back(FieldExpr::product(a[i], FieldExpr::scale(v, b[j])));
    }
  }
  return FieldExpr::sum(std::move(terms));
}

double taming_error(const FieldExpr& f, const FieldExpr& tamed, const ThickGrid& g, double eta, int local_n,
                    int refine_iters) {
  const PointFunction diff = [&](Point2 x) { return std::abs(tamed(x) - f(x)); };
  const double half = g.c + eta;
  const auto centers = g.centers();
  std::vector<double> errs(centers.size(), 0.0);
  parallel_for(centers.size(), [&](std::size_t k) {
    const Point2 c = centers[k];
    double q0 = c.q - half;
    double q1 = c.q + half;
    double p0 = c.p - half;
    double p1 = c.p + half;
    if (!g.periodic) {
      q0 = std::max(q0, 0.0);
      q1 = std::min(q1, 1.0);
      p0 = std::max(p0, 0.0);
      p1 = std::min(p1, 1.0);
      if (q0 >= q1 || p0 >= p1) return;
    }
    errs[k] = maximize(diff, local_n, refine_iters, Domain::chart(q0, q1, p0, p1)).value;
  });
  return *std::max_element(errs.begin(), errs.end());
}

namespace {

TamedTriple build_triple(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, int m, double eta,
                         bool periodic) {
  TamedTriple t;
  t.m = m;
  t.grids = build_cover(m, periodic);
  t.eta = eta > 0.0 ? eta : t.grids[0].c / 8.0;
  const std::array<FieldExpr, 3> in = {f1, f2, f3};
  for (int k = 0; k < 3; ++k) {
    t.fields[k] = tame(in[k], t.grids[k], t.eta);
    t.c0_errors[k] = taming_error(in[k], t.fields[k], t.grids[k], t.eta);
  }
  return t;
}

}  // namespace

TamedTriple tame_triple(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, int m, double eta) {
  return build_triple(f1, f2, f3, m, eta, true);
}

TamedTriple square_tame_triple(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, int m,
                               double eta) {
  return build_triple(f1, f2, f3, m, eta, false);
}

FieldExpr triple_bracket(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3) {
  return poisson(f1, poisson(f2, f3));
}

FieldExpr triple_bracket(const TamedTriple& t) { return triple_bracket(t.fields[0], t.fields[1], t.fields[2]); }

TripleCheck check_triple(const TamedTriple& t, int n) {
  std::vector<FieldExpr> outputs = {triple_bracket(t)};
  for (const auto& f : t.fields) {
    outputs.push_back(differentiate(f, Var::q));
    outputs.push_back(differentiate(f, Var::p));
  }
  const CompiledField prog(outputs);
  const Domain domain = grid_domain(t.grids[0]);
  std::vector<double> row_sup(static_cast<std::size_t>(n), 0.0);
  std::vector<long> row_unlocked(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    std::vector<double> scratch(prog.slot_count());
    std::array<double, 7> out{};
    for (int j = 0; j < n; ++j) {
      prog.evaluate(domain.node(int(i), j, n), scratch, out);
      row_sup[i] = std::max(row_sup[i], std::abs(out[0]));
      const bool locked = (out[1] == 0.0 && out[2] == 0.0) || (out[3] == 0.0 && out[4] == 0.0) ||
                          (out[5] == 0.0 && out[6] == 0.0);
      if (!locked) ++row_unlocked[i];
    }
  });
  TripleCheck c;
  c.n = n;
  c.sup = *std::max_element(row_sup.begin(), row_sup.end());
  for (long u : row_unlocked) c.unlocked_points += u;
  return c;
}

TameSearch tame_to_epsilon(const FieldExpr& f1, const FieldExpr& f2, const FieldExpr& f3, double epsilon,
                           int m_max, bool periodic, int m_start) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("tame_to_epsilon: epsilon must be > 0");
  TameSearch s;
  for (int m = std::max(1, m_start); m <= m_max; ++m) {
    s.triple = build_triple(f1, f2, f3, m, 0.0, periodic);
    const double worst = *std::max_element(s.triple.c0_errors.begin(), s.triple.c0_errors.end());
    s.m_tried.push_back(m);
    s.max_error.push_back(worst);
    if (worst <= epsilon) {
      s.reached = true;
      break;
    }
  }
  return s;
}

}  // namespace rlab
