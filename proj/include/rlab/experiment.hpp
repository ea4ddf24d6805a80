#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

enum class FamilyKind { trig_noise, tamed_lock, smoothing_blend };

std::string to_string(FamilyKind kind);
/// Accepts "trig-noise", "tamed-lock", "smoothing-blend".
FamilyKind parse_family(const std::string& name);

/// C0 ball of radius delta around a field, parameterized by a small vector.
///   trig-noise       f + sum_j theta_j T_j over the eight |k| <= 1 modes,
///                    theta projected onto the l1 ball of radius delta
///   tamed-lock       f + lambda (tame(f, grid(m, offset)) - f), params (lambda, offset_q, offset_p)
///   smoothing-blend  f + lambda (f(. - a) - f), params (lambda, a_q, a_p)
/// lambda is clamped so that a rigorous Lipschitz bound of the change stays <= delta.
struct PerturbationFamily {
  FamilyKind kind = FamilyKind::trig_noise;
  double delta = 0.0;
  int lock_m = 3;

  std::size_t dimension() const;
  /// Maps arbitrary parameters into the feasible set.
  std::vector<double> project(const FieldExpr& f, std::vector<double> params) const;
  /// The member for already projected parameters; all-zero parameters give f itself.
  FieldExpr member(const FieldExpr& f, const std::vector<double>& params) const;
};

enum class Objective { bracket_max, triple_max };

struct SearchOptions {
  int n = 32;
  int refine_iters = 3;
  Objective objective = Objective::bracket_max;
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  double delta = 0.0;
  double best_value = 0.0;
  long evaluations = 0;
  double baseline = 0.0;
  std::vector<double> best_f_params;
  std::vector<double> best_g_params;
  FieldExpr best_f;
  FieldExpr best_g;
  /// Post-hoc sup distances of the reported pair to (F, G).
  double f_dist = 0.0;
  double g_dist = 0.0;
};

/// max {F', G'} (or max {{F', G'}, G'}) on an n x n lattice with refinement.
double search_objective(const FieldExpr& f, const FieldExpr& g, const SearchOptions& options);

/// Seeded random sampling followed by coordinate refinement of the best candidate,
/// minimizing the objective over the family for both fields. Deterministic in seed.
/// `warm_f`, `warm_g` (possibly empty) are evaluated first. Requires budget >= 100.
ExperimentRecord perturb_search(const FieldExpr& f, const FieldExpr& g, const PerturbationFamily& family,
                                long budget, std::uint64_t seed, const SearchOptions& options = {},
                                const std::vector<double>& warm_f = {}, const std::vector<double>& warm_g = {});

/// Same search for max {{F', G'}, G'}. Exploratory only.
ExperimentRecord triple_search(const FieldExpr& f, const FieldExpr& g, const PerturbationFamily& family,
                               long budget, std::uint64_t seed, SearchOptions options = {});

/// Runs the search for each delta in increasing order, warm-starting every run
/// from the previous best pair, so that best values are non-increasing in delta.
/// Records are returned in the order of `deltas`.
std::vector<ExperimentRecord> nested_search(const FieldExpr& f, const FieldExpr& g, FamilyKind kind,
                                            const std::vector<double>& deltas, long budget, std::uint64_t seed,
                                            const SearchOptions& options = {});

}  // namespace rlab
