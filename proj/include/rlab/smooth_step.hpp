#pragma once

namespace rlab {

inline constexpr int kMaxSmoothStepOrder = 20;

/// C-infinity step S built from e^{-1/t}: S(t) = 0 for t <= 0, 1 for t >= 1,
/// S(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) in between.
double smooth_step(double t);

/// order-th derivative of smooth_step, via Taylor-jet arithmetic.
/// Exactly zero outside (0, 1). Throws std::domain_error past kMaxSmoothStepOrder.
double smooth_step_derivative(double t, int order);

/// Sampled sup |S^(order)| on [0, 1], padded by 5%.
double smooth_step_derivative_bound(int order);

}  // namespace rlab
