#pragma once

#include <cstdint>
#include <vector>

#include "rlab/commutator.hpp"
#include "rlab/field.hpp"
#include "rlab/flow.hpp"

namespace rlab {

/// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(int count);

/// Lengths of one explicit path. Both are upper bounds for the corresponding
/// infima over all generators of the same path class.
struct PathLengthReport {
  /// Trapezoid integral over tau of the lattice max of the generator.
  double positive_length = 0.0;
  /// Same for max - min.
  double full_length = 0.0;
  int tau_samples = 0;
  int n = 0;
  std::vector<double> tau;
  std::vector<double> max_per_tau;
  std::vector<double> min_per_tau;
};

PathLengthReport path_length(const CommutatorPath& cp, int n, int tau_samples);

struct Lemma2Options {
  int n = 64;
  int tau_samples = 8;
  int refine_iters = 40;
  int identity_points = 100;
  /// Gauss-Legendre nodes for the integral identity along each trajectory.
  int quadrature_nodes = 128;
  std::uint64_t seed = 7;
  FlowParams flow{};
};

struct Lemma2Report {
  /// Refined max over x of L(x, tau) for the s = t = 1 commutator of H and K,
  /// extreme values over the tau lattice.
  double max_over_tau = 0.0;
  double min_over_tau = 0.0;
  double max_pullback_diff = 0.0;  // max(H o psi_K - H)
  double max_bracket = 0.0;        // max {H, K}
  double identity_residual = 0.0;
  std::vector<double> tau;
  std::vector<double> max_per_tau;
  int n = 0;
  int tau_samples = 0;
};

/// H and K must have zero mean.
Lemma2Report lemma2_check(const FieldExpr& h, const FieldExpr& k, const Lemma2Options& options = {});

struct Hof2Report {
  /// |max(sH) - max(sK)|, the positive lengths of the two autonomous paths.
  double difference = 0.0;
  /// 2 sup|sH - sK| + 1e-6.
  double bound = 0.0;
  bool holds = false;
};

Hof2Report hof2_check(const FieldExpr& h, const FieldExpr& k, double s_scale = 1.0, int n = 128,
                      int refine_iters = 20);

/// Compares the autonomous paths of H and K with the path psi_H^{-tau} psi_K^tau,
/// generated by G(x, tau) = K(psi_H^tau x) - H(x).
struct Hof1Report {
  double difference = 0.0;       // |max H - max K|
  double one_sided_length = 0.0;  // max(int max G, int -min G)
  double full_length = 0.0;       // int (max G - min G)
  bool holds = false;             // difference <= one_sided_length + 1e-5
};

Hof1Report hof1_check(const FieldExpr& h, const FieldExpr& k, int n = 64, int tau_samples = 8,
                      int refine_iters = 10, FlowParams params = {});

}  // namespace rlab
