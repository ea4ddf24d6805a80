#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rlab/grid.hpp"
#include "rlab/hofer.hpp"

using namespace rlab;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const FieldExpr kSinQ = FieldExpr::trig(1, 0, Phase::sin);
const FieldExpr kSinP = FieldExpr::trig(0, 1, Phase::sin);
}  // namespace

TEST_CASE("gauss legendre is exact for low degree") {
  const Quadrature g = gauss_legendre(5);
  double sum_w = 0.0, x9 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sum_w += g.weights[i];
    x9 += g.weights[i] * std::pow(g.nodes[i], 9);
    if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }
  CHECK(sum_w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x9 == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("path lengths") {
  const PathLengthReport same = path_length(CommutatorPath(kSinQ, kSinQ, 0.5, 0.5), 64, 8);
  CHECK(same.positive_length <= 1e-9);
  CHECK(same.full_length <= 1e-9);
  const PathLengthReport r = path_length(CommutatorPath(kSinQ, kSinP, 0.1, 0.1), 64, 8);
  CHECK(r.positive_length <= r.full_length);
  CHECK(r.positive_length <= 0.01 * kTwoPi * kTwoPi + 1e-3);
  CHECK(r.tau.size() == 9);
}

TEST_CASE("commutator length chain on the sine pair") {
  Lemma2Options opt;
  opt.n = 32;
  opt.refine_iters = 20;
  opt.identity_points = 20;
  opt.flow.dt = 1e-2;
  const Lemma2Report r = lemma2_check(kSinQ, kSinP, opt);
  CHECK(r.max_over_tau - r.min_over_tau <= 1e-5);
  CHECK(r.max_over_tau == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(r.max_over_tau - r.max_pullback_diff) <= 1e-4);
  CHECK(r.max_bracket == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-9));
  CHECK(r.identity_residual <= 1e-6);
}

TEST_CASE("autonomous length comparison") {
  const Hof2Report same = hof2_check(kSinQ, kSinQ);
  CHECK(same.difference == 0.0);
  CHECK(same.holds);
  const Hof2Report scaled = hof2_check(kSinQ, 0.9 * kSinQ);
  CHECK(scaled.difference == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(scaled.holds);
  const FieldExpr small = kSinQ + FieldExpr::scale(0.01, FieldExpr::trig(2, 1, Phase::cos));
  const Hof2Report near = hof2_check(kSinQ, small);
  CHECK(near.difference <= 0.02 + 1e-6);
  CHECK(near.holds);
}

TEST_CASE("one-sided length bounds the change of max") {
  const Hof1Report r = hof1_check(kSinQ, 0.8 * kSinQ + 0.1 * kSinP, 32, 8, 10, {1e-2, 1e-13, 100, 3});
  CHECK(r.holds);
  CHECK(r.difference <= r.one_sided_length + 1e-5);
  CHECK(r.one_sided_length <= r.full_length + 1e-12);
}
