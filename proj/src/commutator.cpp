#include "rlab/commutator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rlab/grid.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

namespace {

void require_zero_mean(const FieldExpr& f, const char* name) {
  const double m = mean(f);
  if (std::abs(m) > 1e-10) {
    throw std::invalid_argument(fmt::format("commutator path: {} must have zero mean (mean = {:.3g})", name, m));
  }
}

}  // namespace

CommutatorPath::CommutatorPath(FieldExpr f, FieldExpr g, double s, double t, FlowParams params)
    : f_(std::move(f)),
      g_(std::move(g)),
      s_(s),
      t_(t),
      f_flow_(f_, params),
      g_flow_(g_, params),
      bracket_(poisson(f_, g_)) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("commutator path: s and t must be >= 0");
  require_zero_mean(f_, "F");
  require_zero_mean(g_, "G");
}

FlowComposition CommutatorPath::endpoint_word() const {
  return {{{f_flow_, s_, Direction::forward},
           {g_flow_, t_, Direction::forward},
           {f_flow_, s_, Direction::backward},
           {g_flow_, t_, Direction::backward}}};
}

double eval_L(const CommutatorPath& cp, Point2 x, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("eval_L: tau must lie in [0, 1]");
  if (cp.s() == 0.0) return 0.0;
  // Right to left: f_{tau s}^{-1} moves the point first, then g_t^{-1}.
  const FlowComposition word{{{cp.g_flow(), cp.t(), Direction::backward},
                              {cp.f_flow(), tau * cp.s(), Direction::backward}}};
  const Point2 y = apply_composition(word, x);
  return cp.s() * cp.f()(x) - cp.s() * cp.f()(y);
}

ResidualReport residual(const CommutatorPath& cp, int n, int tau_samples) {
  if (n < 64) throw std::invalid_argument("residual: n must be >= 64");
  if (tau_samples < 8) throw std::invalid_argument("residual: tau_samples must be >= 8");
  if (!(cp.s() > 0.0 && cp.t() > 0.0)) throw std::invalid_argument("residual: s and t must be > 0");
  const double st = cp.s() * cp.t();
  const Domain torus = Domain::torus();
  std::vector<double> row_max(static_cast<std::size_t>(n), 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
      const Point2 x = torus.node(int(i), j, n);
      const double lead = st * cp.bracket()(x);
      for (int k = 0; k <= tau_samples; ++k) {
        const double tau = double(k) / tau_samples;
        m = std::max(m, std::abs(eval_L(cp, x, tau) - lead));
      }
    }
    row_max[i] = m;
  });
  ResidualReport r;
  r.s = cp.s();
  r.t = cp.t();
  r.sup_residual = *std::max_element(row_max.begin(), row_max.end());
  r.ratio = r.sup_residual / st;
  r.n = n;
  r.tau_samples = tau_samples;
  return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least squares: need >= 2 points");
  const double nx = double(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nx;
  my /= nx;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

DyadicScan dyadic_scan(const FieldExpr& f, const FieldExpr& g, int k_min, int k_max, int n, int tau_samples,
                       FlowParams params) {
  if (!(1 <= k_min && k_min < k_max && k_max <= 12)) {
    throw std::invalid_argument("dyadic scan: need 1 <= k_min < k_max <= 12");
  }
  DyadicScan scan;
  std::vector<double> ks;
  std::vector<double> logs;
  bool all_positive = true;
  for (int k = k_min; k <= k_max; ++k) {
    const double h = std::ldexp(1.0, -k);
    ResidualReport r = residual(CommutatorPath(f, g, h, h, params), n, tau_samples);
    r.k = k;
    all_positive = all_positive && r.ratio > 0.0;
    ks.push_back(k);
    logs.push_back(r.ratio > 0.0 ? std::log2(r.ratio) : 0.0);
    scan.reports.push_back(r);
  }
  scan.decay_exponent = all_positive ? least_squares_slope(ks, logs) : std::numeric_limits<double>::quiet_NaN();
  return scan;
}

}  // namespace rlab
