#include "rlab/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rlab/compiled.hpp"
#include "rlab/grid.hpp"
#include "rlab/tamed.hpp"

namespace rlab {

namespace {

struct Mode {
  int kq;
  int kp;
  Phase phase;
};

constexpr std::array<Mode, 8> kNoiseModes = {{{1, 0, Phase::cos},
                                              {1, 0, Phase::sin},
                                              {0, 1, Phase::cos},
                                              {0, 1, Phase::sin},
                                              {1, 1, Phase::cos},
                                              {1, 1, Phase::sin},
                                              {1, -1, Phase::cos},
                                              {1, -1, Phase::sin}}};

// Euclidean projection onto {x : |x|_1 <= radius}.
std::vector<double> project_l1(std::vector<double> x, double radius) {
  if (radius <= 0.0) return std::vector<double>(x.size(), 0.0);
  double norm = 0.0;
  for (double v : x) norm += std::abs(v);
  if (norm <= radius) return x;
  std::vector<double> u(x.size());
  std::transform(x.begin(), x.end(), u.begin(), [](double v) { return std::abs(v); });
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - radius) / double(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (double& v : x) v = std::copysign(std::max(std::abs(v) - theta, 0.0), v);
  return x;
}

double clamp_lambda(double lambda, double change_bound, double delta) {
  lambda = std::clamp(lambda, 0.0, 1.0);
  if (change_bound * lambda > delta) lambda = change_bound > 0.0 ? delta / change_bound : lambda;
  return lambda;
}

double wrap(double x) { return x - std::floor(x); }

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::trig_noise:
      return "trig-noise";
    case FamilyKind::tamed_lock:
      return "tamed-lock";
    case FamilyKind::smoothing_blend:
      return "smoothing-blend";
  }
  return "";
}

FamilyKind parse_family(const std::string& name) {
  if (name == "trig-noise") return FamilyKind::trig_noise;
  if (name == "tamed-lock") return FamilyKind::tamed_lock;
  if (name == "smoothing-blend") return FamilyKind::smoothing_blend;
  throw std::invalid_argument("unknown perturbation family: " + name);
}

std::size_t PerturbationFamily::dimension() const { return kind == FamilyKind::trig_noise ? kNoiseModes.size() : 3; }

std::vector<double> PerturbationFamily::project(const FieldExpr& f, std::vector<double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("perturbation family: wrong parameter count");
  const double lip = propagate_bounds(f).lipschitz;
  switch (kind) {
    case FamilyKind::trig_noise:
      return project_l1(std::move(x), delta);
    case FamilyKind::tamed_lock: {
      const double c = 1.0 / (3.0 * lock_m);
      // |tame(f) - f| <= Lip * (distance from a center to a corner of its eta-enlargement).
      const double bound = lip * std::sqrt(2.0) * (c + c / 8.0);
      return {clamp_lambda(x[0], bound, delta), wrap(x[1]), wrap(x[2])};
    }
    case FamilyKind::smoothing_blend: {
      const double aq = std::clamp(x[1], -0.5, 0.5);
      const double ap = std::clamp(x[2], -0.5, 0.5);
      return {clamp_lambda(x[0], lip * std::hypot(aq, ap), delta), aq, ap};
    }
  }
  return x;
}

FieldExpr PerturbationFamily::member(const FieldExpr& f, const std::vector<double>& x) const {
  switch (kind) {
    case FamilyKind::trig_noise: {
      std::vector<FieldExpr> terms = {f};
      for (std::size_t j = 0; j < kNoiseModes.size(); ++j) {
        if (x[j] == 0.0) continue;
        const Mode& md = kNoiseModes[j];
        terms.push_back(x[j] * FieldExpr::trig(md.kq, md.kp, md.phase));
      }
      return terms.size() == 1 ? f : FieldExpr::sum(std::move(terms));
    }
    case FamilyKind::tamed_lock: {
      if (x[0] == 0.0) return f;
      const ThickGrid grid = thick_grid(lock_m, {x[1], x[2]});
      return (1.0 - x[0]) * f + x[0] * tame(f, grid, grid.c / 8.0);
    }
    case FamilyKind::smoothing_blend:
      if (x[0] == 0.0) return f;
      return (1.0 - x[0]) * f + x[0] * translate(f, x[1], x[2]);
  }
  return f;
}

double search_objective(const FieldExpr& f, const FieldExpr& g, const SearchOptions& options) {
  const FieldExpr b = poisson(f, g);
  const FieldExpr target = options.objective == Objective::bracket_max ? b : poisson(b, g);
  const CompiledField prog({target});
  const PointFunction fn = [&prog](Point2 x) {
    thread_local std::vector<double> scratch;
    if (scratch.size() < prog.slot_count()) scratch.resize(prog.slot_count());
    double out = 0.0;
    prog.evaluate(x, scratch, {&out, 1});
    return out;
  };
  return maximize(fn, options.n, options.refine_iters).value;
}

ExperimentRecord perturb_search(const FieldExpr& f, const FieldExpr& g, const PerturbationFamily& family,
                                long budget, std::uint64_t seed, const SearchOptions& options,
                                const std::vector<double>& warm_f, const std::vector<double>& warm_g) {
  if (budget < 100) throw std::invalid_argument("perturb_search: budget must be >= 100");
  if (!(family.delta >= 0.0)) throw std::invalid_argument("perturb_search: delta must be >= 0");
  const std::size_t d = family.dimension();
  ExperimentRecord rec;
  rec.seed = seed;
  rec.delta = family.delta;
  rec.baseline = search_objective(f, g, options);
  rec.evaluations = 1;
  rec.best_value = rec.baseline;
  rec.best_f_params.assign(d, 0.0);
  rec.best_g_params.assign(d, 0.0);
  rec.best_f = f;
  rec.best_g = g;

  if (family.delta > 0.0) {
    // Joint parameter vector (F part, then G part).
    auto split = [&](const std::vector<double>& x) {
      return std::pair{family.project(f, {x.begin(), x.begin() + d}), family.project(g, {x.begin() + d, x.end()})};
    };
    std::vector<double> best(2 * d, 0.0);
    auto consider = [&](const std::vector<double>& x) {
      const auto [pf, pg] = split(x);
      const double v = search_objective(family.member(f, pf), family.member(g, pg), options);
      ++rec.evaluations;
      if (v < rec.best_value) {
        rec.best_value = v;
        best.assign(pf.begin(), pf.end());
        best.insert(best.end(), pg.begin(), pg.end());
        return true;
      }
      return false;
    };
    if (!warm_f.empty() || !warm_g.empty()) {
      std::vector<double> x = warm_f.empty() ? std::vector<double>(d, 0.0) : warm_f;
      const std::vector<double> wg = warm_g.empty() ? std::vector<double>(d, 0.0) : warm_g;
      x.insert(x.end(), wg.begin(), wg.end());
      consider(x);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&]() {
      std::vector<double> x(2 * d);
      for (std::size_t h = 0; h < 2; ++h) {
        double* v = x.data() + h * d;
        if (family.kind == FamilyKind::trig_noise) {
          for (std::size_t j = 0; j < d; ++j) v[j] = family.delta * (2.0 * unit(rng) - 1.0);
        } else if (family.kind == FamilyKind::tamed_lock) {
          v[0] = unit(rng);
          v[1] = unit(rng);
          v[2] = unit(rng);
        } else {
          v[0] = unit(rng);
          v[1] = 0.5 * unit(rng) - 0.25;
          v[2] = 0.5 * unit(rng) - 0.25;
        }
      }
      return x;
    };
    const long random_phase = budget / 2;
    while (rec.evaluations < random_phase) consider(draw());

    // Coordinate refinement of the incumbent.
    std::vector<double> step(2 * d);
    for (std::size_t j = 0; j < 2 * d; ++j) {
      const std::size_t local = j % d;
      step[j] = family.kind == FamilyKind::trig_noise ? family.delta / 2.0 : local == 0 ? 0.25 : 0.1;
    }
    while (rec.evaluations < budget) {
      bool improved = false;
      for (std::size_t j = 0; j < 2 * d && rec.evaluations < budget; ++j) {
        for (double sign : {1.0, -1.0}) {
          if (rec.evaluations >= budget) break;
          std::vector<double> x = best;
          x[j] += sign * step[j];
          if (consider(x)) {
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        for (double& s : step) s *= 0.5;
        if (*std::max_element(step.begin(), step.end()) < 1e-12) break;
      }
    }
    rec.best_f_params.assign(best.begin(), best.begin() + d);
    rec.best_g_params.assign(best.begin() + d, best.end());
    rec.best_f = family.member(f, rec.best_f_params);
    rec.best_g = family.member(g, rec.best_g_params);
  }
  rec.f_dist = sup_dist(rec.best_f, f, 64, 10);
  rec.g_dist = sup_dist(rec.best_g, g, 64, 10);
  return rec;
}

ExperimentRecord triple_search(const FieldExpr& f, const FieldExpr& g, const PerturbationFamily& family,
                               long budget, std::uint64_t seed, SearchOptions options) {
  options.objective = Objective::triple_max;
  return perturb_search(f, g, family, budget, seed, options);
}

std::vector<ExperimentRecord> nested_search(const FieldExpr& f, const FieldExpr& g, FamilyKind kind,
                                            const std::vector<double>& deltas, long budget, std::uint64_t seed,
                                            const SearchOptions& options) {
  std::vector<std::size_t> order(deltas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
  std::vector<ExperimentRecord> out(deltas.size());
  std::vector<double> warm_f;
  std::vector<double> warm_g;
  for (std::size_t idx : order) {
    PerturbationFamily family{kind, deltas[idx]};
    out[idx] = perturb_search(f, g, family, budget, seed, options, warm_f, warm_g);
    warm_f = out[idx].best_f_params;
    warm_g = out[idx].best_g_params;
  }
  return out;
}

}  // namespace rlab
