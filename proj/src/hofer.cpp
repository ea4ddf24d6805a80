#include "rlab/hofer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rlab/grid.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

Quadrature gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
  Quadrature qd;
  qd.nodes.resize(count);
  qd.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= count; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] to [0, 1], ascending.
    qd.nodes[count - 1 - i] = 0.5 * (x + 1.0);
    qd.weights[count - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return qd;
}

namespace {

double trapezoid(const std::vector<double>& v) {
  const std::size_t m = v.size() - 1;
  double acc = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i < m; ++i) acc += v[i];
  return acc / static_cast<double>(m);
}

std::vector<double> tau_lattice(int tau_samples) {
  std::vector<double> tau(static_cast<std::size_t>(tau_samples) + 1);
  for (int k = 0; k <= tau_samples; ++k) tau[k] = double(k) / tau_samples;
  return tau;
}

void require_zero_mean(const FieldExpr& f, const char* what) {
  if (std::abs(mean(f)) > 1e-10) throw std::invalid_argument(std::string(what) + " must have zero mean");
}

}  // namespace

PathLengthReport path_length(const CommutatorPath& cp, int n, int tau_samples) {
  if (tau_samples < 8) throw std::invalid_argument("path_length: tau_samples must be >= 8");
  PathLengthReport r;
  r.n = n;
  r.tau_samples = tau_samples;
  r.tau = tau_lattice(tau_samples);
  std::vector<double> spread;
  for (double tau : r.tau) {
    const GridSample g = sample(PointFunction([&](Point2 x) { return eval_L(cp, x, tau); }), n);
    r.max_per_tau.push_back(g.max());
    r.min_per_tau.push_back(g.min());
    spread.push_back(g.max() - g.min());
  }
  r.positive_length = trapezoid(r.max_per_tau);
  r.full_length = trapezoid(spread);
  return r;
}

Lemma2Report lemma2_check(const FieldExpr& h, const FieldExpr& k, const Lemma2Options& opt) {
  require_zero_mean(h, "lemma2_check: H");
  require_zero_mean(k, "lemma2_check: K");
  const CommutatorPath cp(h, k, 1.0, 1.0, opt.flow);
  Lemma2Report r;
  r.n = opt.n;
  r.tau_samples = opt.tau_samples;
  r.tau = tau_lattice(opt.tau_samples);
  for (double tau : r.tau) {
    const PointFunction L = [&](Point2 x) { return eval_L(cp, x, tau); };
    r.max_per_tau.push_back(maximize(L, opt.n, opt.refine_iters).value);
  }
  r.max_over_tau = *std::max_element(r.max_per_tau.begin(), r.max_per_tau.end());
  r.min_over_tau = *std::min_element(r.max_per_tau.begin(), r.max_per_tau.end());

  const FlowSpec& kflow = cp.g_flow();
  GridSample diff = pullback(h, FlowComposition{{{kflow, 1.0, Direction::forward}}}, opt.n);
  const GridSample base = sample(h, opt.n);
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= base.values[i];
  const PointFunction pulled = [&](Point2 x) { return h(advance(kflow, x, 1.0)) - h(x); };
  r.max_pullback_diff = maximize(diff, pulled, opt.refine_iters).value;

  r.max_bracket = extrema(cp.bracket(), opt.n, opt.refine_iters).max;

  // H(psi_K x) - H(x) against the integral of {H,K} along the K-trajectory.
  const Quadrature qd = gauss_legendre(opt.quadrature_nodes);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point2> points(static_cast<std::size_t>(opt.identity_points));
  for (auto& x : points) x = {unit(rng), unit(rng)};
  std::vector<double> errs(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point2 x = points[i];
    Point2 y = x;
    double prev = 0.0;
    double integral = 0.0;
    for (std::size_t j = 0; j < qd.nodes.size(); ++j) {
      y = advance(kflow, y, qd.nodes[j] - prev);
      prev = qd.nodes[j];
      integral += qd.weights[j] * cp.bracket()(y);
    }
    y = advance(kflow, y, 1.0 - prev);
    errs[i] = std::abs(h(y) - h(x) - integral);
  });
  r.identity_residual = *std::max_element(errs.begin(), errs.end());
  return r;
}

Hof2Report hof2_check(const FieldExpr& h, const FieldExpr& k, double s_scale, int n, int refine_iters) {
  require_zero_mean(h, "hof2_check: H");
  require_zero_mean(k, "hof2_check: K");
  const FieldExpr sh = s_scale * h;
  const FieldExpr sk = s_scale * k;
  Hof2Report r;
  r.difference = std::abs(extrema(sh, n, refine_iters).max - extrema(sk, n, refine_iters).max);
  r.bound = 2.0 * sup_dist(sh, sk, n, refine_iters) + 1e-6;
  r.holds = r.difference <= r.bound;
  return r;
}

Hof1Report hof1_check(const FieldExpr& h, const FieldExpr& k, int n, int tau_samples, int refine_iters,
                      FlowParams params) {
  if (tau_samples < 8) throw std::invalid_argument("hof1_check: tau_samples must be >= 8");
  const FlowSpec hflow(h, params);
  const auto tau = tau_lattice(tau_samples);
  std::vector<double> hi;
  std::vector<double> lo;
  std::vector<double> spread;
  for (double t : tau) {
    const PointFunction g = [&](Point2 x) { return k(advance(hflow, x, t)) - h(x); };
    const PointFunction neg = [&](Point2 x) { return -g(x); };
    hi.push_back(maximize(g, n, refine_iters).value);
    lo.push_back(-maximize(neg, n, refine_iters).value);
    spread.push_back(hi.back() - lo.back());
  }
  std::vector<double> minus_lo(lo.size());
  std::transform(lo.begin(), lo.end(), minus_lo.begin(), [](double v) { return -v; });
  Hof1Report r;
  r.difference = std::abs(extrema(h, n, refine_iters).max - extrema(k, n, refine_iters).max);
  r.one_sided_length = std::max(trapezoid(hi), trapezoid(minus_lo));
  r.full_length = trapezoid(spread);
  r.holds = r.difference <= r.one_sided_length + 1e-5;
  return r;
}

}  // namespace rlab
