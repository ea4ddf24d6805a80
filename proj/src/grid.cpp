#include "rlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "rlab/compiled.hpp"
#include "rlab/parallel.hpp"
#include "rlab/smooth_step.hpp"

namespace rlab {

double GridSample::min() const { return *std::min_element(values.begin(), values.end()); }
double GridSample::max() const { return *std::max_element(values.begin(), values.end()); }
double GridSample::mean() const { return pairwise_sum(values) / static_cast<double>(values.size()); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

GridSample sample(const PointFunction& f, int n, const Domain& domain) {
  if (n < 2) throw std::invalid_argument("sample: resolution too small");
  GridSample g{n, domain, std::vector<double>(static_cast<std::size_t>(n) * n)};
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (int j = 0; j < n; ++j) g.values[i * n + j] = f(domain.node(int(i), j, n));
  });
  return g;
}

namespace {

// Point evaluator through a flat program; nested brackets repeat many subtrees.
PointFunction compiled(const FieldExpr& f) {
  auto prog = std::make_shared<const CompiledField>(std::vector<FieldExpr>{f});
  return [prog](Point2 x) {
    thread_local std::vector<double> scratch;
    if (scratch.size() < prog->slot_count()) scratch.resize(prog->slot_count());
    double out = 0.0;
    prog->evaluate(x, scratch, {&out, 1});
    return out;
  };
}

}  // namespace

GridSample sample(const FieldExpr& f, int n, const Domain& domain) { return sample(compiled(f), n, domain); }

namespace {

constexpr int kGoldenEvals = 24;
constexpr int kScreenIters = 8;
constexpr int kStarts = 6;
constexpr int kMaxShifts = 8;
constexpr double kStopRadius = 1e-7;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

Point2 clamp_to(const Domain& d, Point2 x) {
  if (d.periodic) return x;
  return {std::clamp(x.q, d.q_min, d.q_max), std::clamp(x.p, d.p_min, d.p_max)};
}

// Discrete local maxima of the lattice, best first.
std::vector<std::size_t> lattice_peaks(const GridSample& g, int limit) {
  const int n = g.n;
  std::vector<std::size_t> peaks;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = g.at(i, j);
      bool peak = true;
      for (int di = -1; di <= 1 && peak; ++di) {
        for (int dj = -1; dj <= 1 && peak; ++dj) {
          if (di == 0 && dj == 0) continue;
          int a = i + di;
          int b = j + dj;
          if (g.domain.periodic) {
            a = (a + n) % n;
            b = (b + n) % n;
          } else if (a < 0 || b < 0 || a >= n || b >= n) {
            continue;
          }
          if (g.at(a, b) > v) peak = false;
        }
      }
      if (peak) peaks.push_back(static_cast<std::size_t>(i) * n + j);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return g.values[a] > g.values[b]; });
  if (peaks.size() > static_cast<std::size_t>(limit)) peaks.resize(limit);
  if (peaks.empty()) {
    peaks.push_back(static_cast<std::size_t>(
        std::max_element(g.values.begin(), g.values.end()) - g.values.begin()));
  }
  return peaks;
}

struct Refined {
  Point2 at;
  double value;
  double radius;
};

// Golden-section search for max over alpha in [-r, r] of f(x + alpha d),
// recentering while the optimum sits at the edge of the bracket so that
// ridges can be followed past the initial window.
double line_search(const PointFunction& f, const Domain& domain, Point2& x, double& fx, Point2 d, double r) {
  double travelled = 0.0;
  for (int shift = 0; shift < kMaxShifts; ++shift) {
    auto eval = [&](double alpha) { return f(clamp_to(domain, {x.q + alpha * d.q, x.p + alpha * d.p})); };
    double a = -r;
    double b = r;
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double fc = eval(c);
    double fe = eval(e);
    double best_alpha = 0.0;
    double best = fx;
    auto consider = [&](double alpha, double v) {
      if (v > best) {
        best = v;
        best_alpha = alpha;
      }
    };
    consider(c, fc);
    consider(e, fe);
    for (int k = 2; k < kGoldenEvals; ++k) {
      if (fc >= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - kInvPhi * (b - a);
        fc = eval(c);
        consider(c, fc);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + kInvPhi * (b - a);
        fe = eval(e);
        consider(e, fe);
      }
    }
    if (best <= fx) break;
    x = clamp_to(domain, {x.q + best_alpha * d.q, x.p + best_alpha * d.p});
    fx = best;
    travelled += std::abs(best_alpha);
    if (std::abs(best_alpha) < 0.75 * r) break;
  }
  return travelled;
}

Refined refine(const PointFunction& f, Point2 start, double start_value, double radius, int iters,
               const Domain& domain) {
  Point2 x = start;
  double fx = start_value;
  double r = radius;
  std::vector<Point2> dirs = {{1.0, 0.0}, {0.0, 1.0}};
  for (int it = 0; it < iters; ++it) {
    const Point2 origin = x;
    for (const Point2 d : dirs) line_search(f, domain, x, fx, d, r);
    const double mq = x.q - origin.q;
    const double mp = x.p - origin.p;
    const double moved = std::hypot(mq, mp);
    if (moved > 0.0) {
      // Powell-style: search along the net displacement as well.
      const Point2 u{mq / moved, mp / moved};
      if (dirs.size() == 2) dirs.push_back(u);
      else dirs[2] = u;
      line_search(f, domain, x, fx, u, std::max(r, moved));
    }
    if (moved < 0.5 * r) r *= 0.5;
    if (r < kStopRadius) break;  // value error ~ r^2
  }
  return {x, fx, r};
}

Maximum best_of(const GridSample& grid, const PointFunction& fn, int refine_iters) {
  const int n = grid.n;
  const double radius = std::max(grid.domain.step_q(n), grid.domain.step_p(n));
  const auto peaks = lattice_peaks(grid, kStarts);
  const std::size_t top = peaks.front();
  Maximum m{grid.values[top], grid.point(int(top / n), int(top % n)), grid.values[top]};
  if (refine_iters > 0) {
    // Short screening run from every start, then the winner is refined fully.
    const int screen = std::min(refine_iters, kScreenIters);
    Refined best{m.at, m.value, radius};
    for (std::size_t k : peaks) {
      const Point2 start = grid.point(int(k / n), int(k % n));
      const Refined r = refine(fn, start, grid.values[k], radius, screen, grid.domain);
      if (r.value > best.value) best = r;
    }
    if (refine_iters > screen && best.radius >= kStopRadius) {
      best = refine(fn, best.at, best.value, best.radius, refine_iters - screen, grid.domain);
    }
    m.value = best.value;
    m.at = best.at;
  }
  m.at = grid.domain.reduce(m.at);
  return m;
}

}  // namespace

Point2 refine_max(const PointFunction& f, Point2 start, double radius, int iters, const Domain& domain) {
  return domain.reduce(refine(f, start, f(start), radius, iters, domain).at);
}

Maximum maximize(const GridSample& grid, const PointFunction& f, int refine_iters) {
  return best_of(grid, f, refine_iters);
}

Maximum maximize(const PointFunction& f, int n, int refine_iters, const Domain& domain) {
  return best_of(sample(f, n, domain), f, refine_iters);
}

Extrema extrema(const PointFunction& f, int n, int refine_iters, const Domain& domain) {
  if (n < 2) throw std::invalid_argument("extrema: resolution too small");
  GridSample g = sample(f, n, domain);
  const Maximum hi = best_of(g, f, refine_iters);
  for (double& v : g.values) v = -v;
  const PointFunction minus = [&f](Point2 x) { return -f(x); };
  const Maximum lo = best_of(g, minus, refine_iters);
  Extrema e;
  e.max = hi.value;
  e.argmax = hi.at;
  e.grid_max = hi.grid_value;
  e.min = -lo.value;
  e.argmin = lo.at;
  e.grid_min = -lo.grid_value;
  return e;
}

Extrema extrema(const FieldExpr& f, int n, int refine_iters, const Domain& domain) {
  Extrema e = extrema(compiled(f), n, refine_iters, domain);
  const FieldBounds b = propagate_bounds(f, domain);
  const double pad = b.lipschitz * std::max(domain.step_q(n), domain.step_p(n)) * std::sqrt(2.0) / 2.0;
  e.max_upper = e.grid_max + pad;
  e.min_lower = e.grid_min - pad;
  return e;
}

double mean(const FieldExpr& f, int n) {
  n = std::max(n, 2 * max_trig_mode(f) + 2);
  return sample(f, n, Domain::torus()).mean();
}

FieldExpr normalize(const FieldExpr& f, int n) {
  if (f.kind() == FieldExpr::Kind::constant) return FieldExpr::constant(0.0);
  const double m = mean(f, n);
  if (std::abs(m) < 1e-14) return f;
  return FieldExpr::sum({f, FieldExpr::constant(-m)});
}

double sup_dist(const FieldExpr& f, const FieldExpr& g, int n, int refine_iters, const Domain& domain) {
  const PointFunction diff = [d = compiled(f - g)](Point2 x) { return std::abs(d(x)); };
  return extrema(diff, n, refine_iters, domain).max;
}

FieldBounds propagate_bounds(const FieldExpr& f, const Domain& domain) {
  using Kind = FieldExpr::Kind;
  switch (f.kind()) {
    case Kind::constant:
      return {std::abs(f.value()), 0.0};
    case Kind::coord: {
      double sup = 1.0;
      if (!domain.periodic) {
        sup = f.var() == Var::q ? std::max(std::abs(domain.q_min), std::abs(domain.q_max))
                                : std::max(std::abs(domain.p_min), std::abs(domain.p_max));
      }
      return {sup, 1.0};
    }
    case Kind::trig:
      return {1.0, 2.0 * std::numbers::pi * std::hypot(double(f.kq()), double(f.kp()))};
    case Kind::bump: {
      const auto& b = f.bump_params();
      const double w = b.outer - b.inner;
      const double sup = b.order == 0 ? 1.0 : smooth_step_derivative_bound(b.order) / std::pow(w, b.order);
      const double lip = smooth_step_derivative_bound(b.order + 1) / std::pow(w, b.order + 1);
      return {sup, lip};
    }
    case Kind::sum: {
      FieldBounds acc;
      for (const auto& c : f.children()) {
        const FieldBounds cb = propagate_bounds(c, domain);
        acc.sup += cb.sup;
        acc.lipschitz += cb.lipschitz;
      }
      return acc;
    }
    case Kind::product: {
      const FieldBounds a = propagate_bounds(f.children()[0], domain);
      const FieldBounds b = propagate_bounds(f.children()[1], domain);
      return {a.sup * b.sup, a.sup * b.lipschitz + b.sup * a.lipschitz};
    }
    case Kind::scale: {
      const FieldBounds c = propagate_bounds(f.children()[0], domain);
      return {std::abs(f.value()) * c.sup, std::abs(f.value()) * c.lipschitz};
    }
  }
  return {};
}

}  // namespace rlab
