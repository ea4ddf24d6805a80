#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "rlab/compiled.hpp"
#include "rlab/field.hpp"
#include "rlab/grid.hpp"

namespace rlab {

struct FlowParams {
  double dt = 1e-3;
  double fp_tol = 1e-13;
  int fp_max_iters = 100;
  /// Gauss-Legendre collocation stages: 1 is the implicit midpoint rule,
  /// 2 and 3 are its order-4 and order-6 relatives.
  int stages = 3;
};

/// Fixed-point iteration for an implicit step did not reach fp_tol.
class FlowError : public std::runtime_error {
 public:
  FlowError(Point2 point, double step, int iterations);
  Point2 point() const { return point_; }
  double step() const { return step_; }

 private:
  Point2 point_;
  double step_;
};

/// Time-independent Hamiltonian with integrator settings; q' = H_p, p' = -H_q.
class FlowSpec {
 public:
  explicit FlowSpec(FieldExpr hamiltonian, FlowParams params = {}, Domain domain = Domain::torus());

  const FieldExpr& hamiltonian() const { return hamiltonian_; }
  const FlowParams& params() const { return params_; }
  const Domain& domain() const { return domain_; }

  /// X_H(x) = (H_p, -H_q).
  Point2 velocity(Point2 x) const;

 private:
  FieldExpr hamiltonian_;
  std::shared_ptr<const CompiledField> gradient_;  // outputs (H_p, H_q)
  FlowParams params_;
  Domain domain_;
};

/// psi_H^T(x). Negative T integrates backward. Steps of size dt, the last one
/// shortened; the result is reduced mod 1 on the torus.
Point2 advance(const FlowSpec& spec, Point2 x, double time);

enum class Direction { forward, backward };

struct FlowStep {
  FlowSpec flow;
  double time = 0.0;
  Direction direction = Direction::forward;
};

/// A word phi_1 phi_2 ... phi_k of flow maps, written left to right as in
/// function composition: the point is moved by the last entry first.
struct FlowComposition {
  std::vector<FlowStep> steps;
};

Point2 apply_composition(const FlowComposition& c, Point2 x);

/// Samples of f composed with the map of c on the n x n torus lattice.
GridSample pullback(const FieldExpr& f, const FlowComposition& c, int n);

}  // namespace rlab
