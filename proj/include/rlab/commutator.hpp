#pragma once

#include <vector>

#include "rlab/field.hpp"
#include "rlab/flow.hpp"

namespace rlab {

/// The commutator of the time-s flow of F and the time-t flow of G, seen as a
/// path generated by the time-dependent Hamiltonian
///   L(x, tau) = s F(x) - s F(g_t^{-1} f_{tau s}^{-1} x).
class CommutatorPath {
 public:
  /// F and G must have zero mean (checked to 1e-10); s, t >= 0.
  CommutatorPath(FieldExpr f, FieldExpr g, double s, double t, FlowParams params = {});

  const FieldExpr& f() const { return f_; }
  const FieldExpr& g() const { return g_; }
  double s() const { return s_; }
  double t() const { return t_; }
  const FlowSpec& f_flow() const { return f_flow_; }
  const FlowSpec& g_flow() const { return g_flow_; }
  /// {F, G}, built once.
  const FieldExpr& bracket() const { return bracket_; }

  /// The word f_s g_t f_s^{-1} g_t^{-1}, the time-one map of the path.
  FlowComposition endpoint_word() const;

 private:
  FieldExpr f_;
  FieldExpr g_;
  double s_;
  double t_;
  FlowSpec f_flow_;
  FlowSpec g_flow_;
  FieldExpr bracket_;
};

/// L_{s,t}(x, tau) for tau in [0, 1].
double eval_L(const CommutatorPath& cp, Point2 x, double tau);

struct ResidualReport {
  int k = 0;
  double s = 0.0;
  double t = 0.0;
  /// Lattice sup of |L(x, tau) - s t {F,G}(x)|.
  double sup_residual = 0.0;
  double ratio = 0.0;
  int n = 0;
  int tau_samples = 0;
};

/// Sup over the n x n torus lattice and tau in {0, 1/tau_samples, ..., 1}.
/// Requires n >= 64, tau_samples >= 8 and s, t > 0.
ResidualReport residual(const CommutatorPath& cp, int n, int tau_samples);

struct DyadicScan {
  std::vector<ResidualReport> reports;
  /// Least-squares slope of log2(ratio) against k; NaN if any ratio is zero.
  double decay_exponent = 0.0;
};

/// Residual reports for s = t = 2^-k, k = k_min..k_max (1 <= k_min < k_max <= 12).
DyadicScan dyadic_scan(const FieldExpr& f, const FieldExpr& g, int k_min, int k_max, int n, int tau_samples,
                       FlowParams params = {});

/// Slope of the least-squares line through (x_i, y_i).
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rlab
