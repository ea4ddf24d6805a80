#include "rlab/smooth_step.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace rlab {
namespace {

// Truncated Taylor series a_0 + a_1 h + ... + a_n h^n around the evaluation point.
struct Jet {
  int n = 0;
  std::array<double, kMaxSmoothStepOrder + 1> c{};
};

Jet variable(double t0, double slope, int n) {
  Jet j;
  j.n = n;
  j.c[0] = t0;
  if (n >= 1) j.c[1] = slope;
  return j;
}

Jet reciprocal(const Jet& a) {
  Jet b;
  b.n = a.n;
  b.c[0] = 1.0 / a.c[0];
  for (int k = 1; k <= a.n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a.c[j] * b.c[k - j];
    b.c[k] = -acc * b.c[0];
  }
  return b;
}

Jet exp(const Jet& a) {
  Jet e;
  e.n = a.n;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= a.n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a.c[j] * e.c[k - j];
    e.c[k] = acc / k;
  }
  return e;
}

Jet mul(const Jet& a, const Jet& b) {
  Jet r;
  r.n = a.n;
  for (int k = 0; k <= a.n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
    r.c[k] = acc;
  }
  return r;
}

Jet add(const Jet& a, const Jet& b) {
  Jet r;
  r.n = a.n;
  for (int k = 0; k <= a.n; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

Jet negate(Jet a) {
  for (int k = 0; k <= a.n; ++k) a.c[k] = -a.c[k];
  return a;
}

// Below this distance from an endpoint e^{-1/t} and all its derivatives underflow.
constexpr double kFlat = 1e-3;

}  // namespace

double smooth_step(double t) {
  if (t <= kFlat) return 0.0;
  if (t >= 1.0 - kFlat) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smooth_step_derivative(double t, int order) {
  if (order < 0 || order > kMaxSmoothStepOrder) {
    throw std::domain_error("smooth_step_derivative: unsupported order " + std::to_string(order));
  }
  if (order == 0) return smooth_step(t);
  if (t <= kFlat || t >= 1.0 - kFlat) return 0.0;

  const Jet left = exp(negate(reciprocal(variable(t, 1.0, order))));
  const Jet right = exp(negate(reciprocal(variable(1.0 - t, -1.0, order))));
  const Jet s = mul(left, reciprocal(add(left, right)));

  double factorial = 1.0;
  for (int k = 2; k <= order; ++k) factorial *= k;
  return factorial * s.c[order];
}

double smooth_step_derivative_bound(int order) {
  static std::mutex mutex;
  static std::array<double, kMaxSmoothStepOrder + 1> cache{};
  static std::array<bool, kMaxSmoothStepOrder + 1> ready{};
  if (order < 0 || order > kMaxSmoothStepOrder) {
    throw std::domain_error("smooth_step_derivative_bound: unsupported order");
  }
  std::lock_guard lock(mutex);
  if (!ready[order]) {
    constexpr int kSamples = 8000;
    double best = 0.0;
    for (int i = 1; i < kSamples; ++i) {
      best = std::max(best, std::abs(smooth_step_derivative(double(i) / kSamples, order)));
    }
    cache[order] = 1.05 * best;
    ready[order] = true;
  }
  return cache[order];
}

}  // namespace rlab
