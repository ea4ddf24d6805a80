#include "rlab/flow.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

#include "rlab/parallel.hpp"

namespace rlab {

FlowError::FlowError(Point2 point, double step, int iterations)
    : std::runtime_error(fmt::format(
          "fixed-point iteration diverged at (q={:.17g}, p={:.17g}) with step {:.17g} after {} iterations",
          point.q, point.p, step, iterations)),
      point_(point),
      step_(step) {}

FlowSpec::FlowSpec(FieldExpr hamiltonian, FlowParams params, Domain domain)
    : hamiltonian_(std::move(hamiltonian)),
      gradient_(std::make_shared<CompiledField>(std::vector<FieldExpr>{
          differentiate(hamiltonian_, Var::p), differentiate(hamiltonian_, Var::q)})),
      params_(params),
      domain_(domain) {
  if (!(params_.dt > 0.0 && params_.dt <= 1e-2)) throw std::invalid_argument("flow: dt must lie in (0, 1e-2]");
  if (!(params_.fp_tol > 0.0 && params_.fp_tol <= 1e-10)) {
    throw std::invalid_argument("flow: fp_tol must lie in (0, 1e-10]");
  }
  if (params_.fp_max_iters < 10) throw std::invalid_argument("flow: fp_max_iters must be >= 10");
  if (params_.stages < 1 || params_.stages > 3) throw std::invalid_argument("flow: stages must be 1, 2 or 3");
}

Point2 FlowSpec::velocity(Point2 x) const {
  thread_local std::vector<double> scratch;
  if (scratch.size() < gradient_->slot_count()) scratch.resize(gradient_->slot_count());
  std::array<double, 2> out{};
  gradient_->evaluate(x, scratch, out);
  return {out[0], -out[1]};
}

namespace {

struct Tableau {
  int s;
  std::array<std::array<double, 3>, 3> a;
  std::array<double, 3> b;
  std::array<double, 3> c;
};

const Tableau& gauss_tableau(int stages) {
  static const double r3 = std::sqrt(3.0);
  static const double r15 = std::sqrt(15.0);
  static const Tableau one{1, {{{0.5, 0, 0}}}, {1.0, 0, 0}, {0.5, 0, 0}};
  static const Tableau two{2,
                           {{{0.25, 0.25 - r3 / 6.0, 0}, {0.25 + r3 / 6.0, 0.25, 0}}},
                           {0.5, 0.5, 0},
                           {0.5 - r3 / 6.0, 0.5 + r3 / 6.0, 0}};
  static const Tableau three{3,
                             {{{5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0},
                               {5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0},
                               {5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0}}},
                             {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0},
                             {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0}};
  return stages == 1 ? one : stages == 2 ? two : three;
}

using Stages = std::array<Point2, 3>;

// Extrapolates the previous step's collocation polynomial to the new stage times.
Stages predict(const Tableau& tab, const Stages& prev, double ratio) {
  Stages guess{};
  for (int i = 0; i < tab.s; ++i) {
    const double t = 1.0 + tab.c[i] * ratio;
    for (int j = 0; j < tab.s; ++j) {
      double w = 1.0;
      for (int m = 0; m < tab.s; ++m) {
        if (m != j) w *= (t - tab.c[m]) / (tab.c[j] - tab.c[m]);
      }
      guess[i].q += w * prev[j].q;
      guess[i].p += w * prev[j].p;
    }
  }
  return guess;
}

// One collocation step; `k` holds the initial stage guess and receives the converged stages.
Point2 collocation_step(const FlowSpec& spec, const Tableau& tab, Point2 y, double h, Stages& k) {
  const auto& prm = spec.params();
  for (int iter = 1;; ++iter) {
    std::array<Point2, 3> next{};
    double change = 0.0;
    for (int i = 0; i < tab.s; ++i) {
      Point2 stage = y;
      for (int j = 0; j < tab.s; ++j) {
        stage.q += h * tab.a[i][j] * k[j].q;
        stage.p += h * tab.a[i][j] * k[j].p;
      }
      next[i] = spec.velocity(stage);
      change = std::max({change, std::abs(h * (next[i].q - k[i].q)), std::abs(h * (next[i].p - k[i].p))});
    }
    k = next;
    if (change <= prm.fp_tol) break;
    if (iter >= prm.fp_max_iters || !std::isfinite(change)) throw FlowError(y, h, iter);
  }
  Point2 out = y;
  for (int i = 0; i < tab.s; ++i) {
    out.q += h * tab.b[i] * k[i].q;
    out.p += h * tab.b[i] * k[i].p;
  }
  return out;
}

}  // namespace

Point2 advance(const FlowSpec& spec, Point2 x, double time) {
  if (time == 0.0) return spec.domain().reduce(x);
  const Tableau& tab = gauss_tableau(spec.params().stages);
  const double dt = spec.params().dt;
  const double span = std::abs(time);
  const double sign = time > 0.0 ? 1.0 : -1.0;
  const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
  Point2 y = x;
  Stages k{};
  const Point2 f0 = spec.velocity(y);
  for (int i = 0; i < tab.s; ++i) k[i] = f0;
  double prev_h = 0.0;
  for (long n = 0; n < steps; ++n) {
    const double h = n + 1 < steps ? sign * dt : time - sign * dt * static_cast<double>(steps - 1);
    if (n > 0) k = predict(tab, k, h / prev_h);
    y = collocation_step(spec, tab, y, h, k);
    prev_h = h;
  }
  return spec.domain().reduce(y);
}

Point2 apply_composition(const FlowComposition& c, Point2 x) {
  if (c.steps.empty()) throw std::invalid_argument("flow composition must be non-empty");
  Point2 y = x;
  for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
    const double t = it->direction == Direction::forward ? it->time : -it->time;
    y = advance(it->flow, y, t);
  }
  return y;
}

GridSample pullback(const FieldExpr& f, const FlowComposition& c, int n) {
  if (n < 32) throw std::invalid_argument("pullback: resolution must be >= 32");
  return sample(PointFunction([&](Point2 x) { return f(apply_composition(c, x)); }), n, Domain::torus());
}

}  // namespace rlab
