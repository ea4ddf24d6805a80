#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rlab/grid.hpp"
#include "rlab/tamed.hpp"

using namespace rlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const FieldExpr kSinQ = FieldExpr::trig(1, 0, Phase::sin);
const FieldExpr kSinP = FieldExpr::trig(0, 1, Phase::sin);
const FieldExpr kSinQP = FieldExpr::trig(1, 1, Phase::sin);

// Independent membership test: point x lies in a closed square of grid (m, offset).
bool in_grid(Point2 x, int m, double offset) {
  const double c = 1.0 / (3 * m);
  auto hit = [&](double v) {
    for (int i = 0; i < m; ++i) {
      const double center = 3 * i * c + offset;
      double d = std::abs(v - center);
      d = std::min(d, std::abs(d - 1.0));
      if (d <= c + 1e-12) return true;
    }
    return false;
  };
  return hit(x.q) && hit(x.p);
}

}  // namespace

TEST_CASE("thick grid geometry") {
  const ThickGrid g = thick_grid(3, {0.0, 0.0});
  CHECK(g.c == doctest::Approx(1.0 / 9));
  const auto centers = g.centers();
  CHECK(centers.size() == 9);
  double min_gap = 1.0;
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      double dq = std::abs(centers[a].q - centers[b].q);
      double dp = std::abs(centers[a].p - centers[b].p);
      dq = std::min(dq, 1.0 - dq);
      dp = std::min(dp, 1.0 - dp);
      min_gap = std::min(min_gap, std::max(dq, dp) - 2 * g.c);
    }
  }
  CHECK(min_gap == doctest::Approx(g.c));
  CHECK(g.contains({1.0 / 9, 0.0}));
  CHECK_FALSE(g.contains({1.5 / 9, 0.0}));
  CHECK(g.center_distance({0.99, 0.01}) == doctest::Approx(0.01));
}

TEST_CASE("three grids cover the torus") {
  for (int m : {1, 2}) {
    const auto cover = build_cover(m);
    const int n = 300 * m;
    long missed = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Point2 x{double(i) / n, double(j) / n};
        if (!(cover[0].contains(x) || cover[1].contains(x) || cover[2].contains(x))) ++missed;
      }
    }
    CHECK(missed == 0);
  }
  const double c = 1.0 / 3;
  const Point2 x{1.5 * c, 2.5 * c};
  int hits = 0;
  for (int k = 0; k < 3; ++k) hits += in_grid(x, 1, k * c) ? 1 : 0;
  CHECK(hits == 1);
  const auto cover = build_cover(1);
  CHECK(int(cover[0].contains(x)) + int(cover[1].contains(x)) + int(cover[2].contains(x)) == 1);
}

TEST_CASE("tame keeps constants and respects the oscillation bound") {
  const ThickGrid g = thick_grid(4, {0.0, 0.0});
  const double eta = g.c / 8;
  const FieldExpr k = FieldExpr::constant(2.5);
  CHECK(tame(k, g, eta) == k);
  const FieldExpr t = tame(kSinQ, g, eta);
  const double err = taming_error(kSinQ, t, g, eta);
  CHECK(err <= kTwoPi * (2 * g.c + 2 * eta) * (1 + 1e-6));
  CHECK(err == doctest::Approx(sup_dist(kSinQ, t, 96, 10)).epsilon(1e-6));
  CHECK_THROWS_AS(tame(kSinQ, g, g.c / 3), std::invalid_argument);
}

TEST_CASE("tamed gradient vanishes near squares") {
  const ThickGrid g = thick_grid(2, {0.05, 0.1});
  const double eta = g.c / 8;
  const FieldExpr t = tame(kSinQ + kSinP, g, eta);
  const FieldExpr tq = differentiate(t, Var::q);
  const FieldExpr tp = differentiate(t, Var::p);
  double worst = 0.0;
  for (const Point2 center : g.centers()) {
    const double r = g.c + eta / 4;
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const Point2 x{center.q - r + 2 * r * i / 20, center.p - r + 2 * r * j / 20};
        worst = std::max({worst, std::abs(tq(x)), std::abs(tp(x))});
        CHECK(t(x) == doctest::Approx((kSinQ + kSinP)(center)).epsilon(1e-12));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("tamed triple kills the triple bracket") {
  const TamedTriple t = tame_triple(kSinQ, kSinP, kSinQP, 2);
  const TripleCheck chk = check_triple(t, 512);
  CHECK(chk.sup <= 1e-9);
  CHECK(chk.unlocked_points == 0);
  const TamedTriple constants =
      tame_triple(FieldExpr::constant(1), FieldExpr::constant(2), FieldExpr::constant(3), 3);
  for (double e : constants.c0_errors) CHECK(e == 0.0);
}

TEST_CASE("errors at m = 6 respect the Lipschitz bound") {
  const TamedTriple t = tame_triple(kSinQ, kSinP, kSinQP, 6);
  const double c = 1.0 / 18;
  CHECK(t.c0_errors[0] <= kTwoPi * (2 * c + 2 * t.eta));
  CHECK(t.c0_errors[1] <= kTwoPi * (2 * c + 2 * t.eta));
  // sin 2pi(q + p) has Lipschitz constant 2 pi sqrt(2) in the max norm pairing
  CHECK(t.c0_errors[2] <= 2 * kTwoPi * (2 * c + 2 * t.eta));
}

TEST_CASE("square taming of compactly supported fields") {
  const FieldExpr bump = FieldExpr::bump(Var::q, 0.5, 0.2, 0.35, false) * FieldExpr::bump(Var::p, 0.5, 0.2, 0.35, false);
  const FieldExpr f1 = bump * kSinQ;
  const FieldExpr f2 = bump * kSinP;
  const FieldExpr f3 = bump * kSinQP;
  const TamedTriple t = square_tame_triple(f1, f2, f3, 4);
  CHECK_FALSE(t.grids[0].periodic);
  const TripleCheck chk = check_triple(t, 256);
  CHECK(chk.sup <= 1e-9);
  const Domain square = Domain::unit_square();
  CHECK(t.c0_errors[0] == doctest::Approx(sup_dist(f1, t.fields[0], 128, 10, square)).epsilon(1e-3));
}

TEST_CASE("epsilon search reports every m tried") {
  const TameSearch s = tame_to_epsilon(0.2 * kSinQ, 0.2 * kSinP, 0.2 * kSinQP, 0.2, 6);
  CHECK(s.reached);
  CHECK(s.m_tried.size() == s.max_error.size());
  CHECK(s.max_error.back() <= 0.2);
  for (std::size_t i = 0; i + 1 < s.max_error.size(); ++i) CHECK(s.max_error[i] > 0.2);
}
