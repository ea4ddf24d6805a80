// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
//
// Oracles here are computed independently of the library code paths they
// check (closed-form shears, finite differences, explicit membership tests).

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "random_fields.hpp"
#include "rlab/commutator.hpp"
#include "rlab/experiment.hpp"
#include "rlab/flow.hpp"
#include "rlab/grid.hpp"
#include "rlab/hofer.hpp"
#include "rlab/implant.hpp"
#include "rlab/io.hpp"
#include "rlab/parallel.hpp"
#include "rlab/parse.hpp"
#include "rlab/tamed.hpp"

using namespace rlab;
using rlab::testing::random_points;
using rlab::testing::random_sparse_field;
using rlab::testing::random_trig_field;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const FieldExpr kSinQ = FieldExpr::trig(1, 0, Phase::sin);
const FieldExpr kSinP = FieldExpr::trig(0, 1, Phase::sin);
const FieldExpr kSinQP = FieldExpr::trig(1, 1, Phase::sin);

/// Collects named checks; the criterion passes when all of them do.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    fmt::print("  [{}] {}\n", ok ? "ok" : "FAILED", what);
    all_ &= ok;
  }
  bool passed() const { return all_; }

 private:
  bool all_ = true;
};

double lattice_sup(const FieldExpr& f, int n) {
  const GridSample g = sample(f, n);
  return std::max(std::abs(g.min()), std::abs(g.max()));
}

double torus_dist(Point2 a, Point2 b) {
  auto gap = [](double u, double v) {
    const double d = std::abs(u - v);
    return std::min(d, 1.0 - d);
  };
  return std::max(gap(a.q, b.q), gap(a.p, b.p));
}

std::string sci(double v) { return fmt::format("{:.3e}", v); }

// ---------------------------------------------------------------------------
// 1. bracket engine

void criterion1(Checks& c) {
  std::mt19937_64 rng(101);
  double anti = 0.0, bilin = 0.0, leibniz = 0.0, jacobi = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FieldExpr f = random_trig_field(rng, 2, 1.0);
    const FieldExpr g = random_trig_field(rng, 2, 1.0);
    const FieldExpr h = random_trig_field(rng, 2, 1.0);
    const double a = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    const GridSample fs = sample(f, 128);
    const GridSample gs = sample(g, 128);
    const GridSample fg = sample(poisson(f, g), 128);
    const GridSample gf = sample(poisson(g, f), 128);
    const GridSample ff = sample(poisson(f, f), 128);
    const GridSample fh = sample(poisson(f, h), 128);
    const GridSample gh = sample(poisson(g, h), 128);
    const GridSample lin = sample(poisson(a * f + g, h), 128);
    const GridSample prod = sample(poisson(f * g, h), 128);
    const GridSample j1 = sample(poisson(f, poisson(g, h)), 128);
    const GridSample j2 = sample(poisson(g, poisson(h, f)), 128);
    const GridSample j3 = sample(poisson(h, poisson(f, g)), 128);
    for (std::size_t i = 0; i < fs.values.size(); ++i) {
      anti = std::max({anti, std::abs(ff.values[i]), std::abs(fg.values[i] + gf.values[i])});
      bilin = std::max(bilin, std::abs(lin.values[i] - (a * fh.values[i] + gh.values[i])));
      leibniz = std::max(leibniz, std::abs(prod.values[i] - (fs.values[i] * gh.values[i] + gs.values[i] * fh.values[i])));
      jacobi = std::max(jacobi, std::abs(j1.values[i] + j2.values[i] + j3.values[i]));
    }
  }
  c.expect(anti <= 1e-8, "antisymmetry residual " + sci(anti) + " <= 1e-8");
  c.expect(bilin <= 1e-8, "bilinearity residual " + sci(bilin) + " <= 1e-8");
  c.expect(leibniz <= 1e-8, "Leibniz residual " + sci(leibniz) + " <= 1e-8");
  c.expect(jacobi <= 1e-8, "Jacobi residual " + sci(jacobi) + " <= 1e-8");

  // exact derivative against a central difference, relative to 1 + |f|_{C^2}
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FieldExpr f = random_trig_field(rng, 2, 1.0);
    const FieldExpr fq = differentiate(f, Var::q);
    const FieldExpr fp = differentiate(f, Var::p);
    double c2 = std::max(lattice_sup(f, 64), std::max(lattice_sup(fq, 64), lattice_sup(fp, 64)));
    for (const FieldExpr& d2 : {differentiate(fq, Var::q), differentiate(fq, Var::p), differentiate(fp, Var::p)}) {
      c2 = std::max(c2, lattice_sup(d2, 64));
    }
    for (const Point2 x : random_points(rng, 10)) {
      const double dq = (f({x.q + h, x.p}) - f({x.q - h, x.p})) / (2 * h);
      const double dp = (f({x.q, x.p + h}) - f({x.q, x.p - h})) / (2 * h);
      worst = std::max({worst, std::abs(fq(x) - dq) / (1 + c2), std::abs(fp(x) - dp) / (1 + c2)});
    }
  }
  c.expect(worst <= 1e-6, "exact vs central difference at 200 points " + sci(worst) + " <= 1e-6 relative");
}

// ---------------------------------------------------------------------------
// 2. flow integrator

void criterion2(Checks& c) {
  std::mt19937_64 rng(202);
  const FlowSpec shear(kSinP);
  double shear_err = 0.0;
  for (const Point2 x : random_points(rng, 100)) {
    const double t = 1.7;
    const double q = x.q + kTwoPi * std::cos(kTwoPi * x.p) * t;
    shear_err = std::max(shear_err, torus_dist(advance(shear, x, t), {q - std::floor(q), x.p}));
  }
  c.expect(shear_err <= 1e-8, "shear closed form " + sci(shear_err) + " <= 1e-8");

  double drift = 0.0, composition = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const FieldExpr h = random_trig_field(rng, 2, 0.1);
    const FlowSpec spec(h);
    for (const Point2 x : random_points(rng, 10)) {
      const Point2 y = advance(spec, x, 2.0);
      drift = std::max(drift, std::abs(h(y) - h(x)));
    }
    for (const Point2 x : random_points(rng, 5)) {
      const Point2 direct = advance(spec, x, 1.3);
      const Point2 split = advance(spec, advance(spec, x, 0.45), 0.85);
      composition = std::max(composition, torus_dist(direct, split));
    }
  }
  c.expect(drift <= 1e-8, "energy drift over T = 2, dt = 1e-3, 10 Hamiltonians " + sci(drift) + " <= 1e-8");
  c.expect(composition <= 1e-8, "flow composition " + sci(composition) + " <= 1e-8");

  const FieldExpr f = random_sparse_field(rng, 3, 0.15);
  const FieldExpr g = random_sparse_field(rng, 3, 0.15);
  const FieldExpr b = poisson(f, g);
  const FlowSpec gf(g, {1e-4, 1e-14, 100, 3});
  const double step = 1e-4;
  double compat = 0.0;
  for (const Point2 x : random_points(rng, 100)) {
    const double d = (f(advance(gf, x, step)) - f(advance(gf, x, -step))) / (2 * step);
    compat = std::max(compat, std::abs(d - b(x)));
  }
  c.expect(compat <= 1e-6, "d/dt F(psi_G^t x) = {F,G}(x) at 100 points " + sci(compat) + " <= 1e-6");
}

// ---------------------------------------------------------------------------
// 3. dyadic commutator scan

// Closed-form residual sup for F = sin 2pi q, G = sin 2pi p: both flows are shears,
// f_s^{-1}(q, p) = (q, p + 2 pi s cos 2pi q), g_t^{-1}(q, p) = (q - 2 pi t cos 2pi p, p).
double shear_residual_sup(double s, double t, int n, int tau_samples) {
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const double q = double(i) / n;
    const double cq = std::cos(kTwoPi * q);
    const double sq = std::sin(kTwoPi * q);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p = double(j) / n;
      const double bracket = kTwoPi * kTwoPi * cq * std::cos(kTwoPi * p);
      for (int k = 0; k <= tau_samples; ++k) {
        const double tau = double(k) / tau_samples;
        const double p1 = p + kTwoPi * tau * s * cq;
        const double q2 = q - kTwoPi * t * std::cos(kTwoPi * p1);
        const double l = s * (sq - std::sin(kTwoPi * q2));
        worst = std::max(worst, std::abs(l - s * t * bracket));
      }
    }
    row_max[i] = worst;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

void criterion3(Checks& c) {
  const DyadicScan scan = dyadic_scan(kSinQ, kSinP, 2, 8, 128, 16);
  fmt::print("  k   sup_residual   ratio       oracle_sup(N=512, tau=64)\n");
  double worst_rel = 0.0;
  for (const auto& r : scan.reports) {
    const double oracle = shear_residual_sup(r.s, r.t, 512, 64);
    worst_rel = std::max(worst_rel, std::abs(r.sup_residual - oracle) / oracle);
    fmt::print("  {}   {:.6e}   {:.6e}   {:.6e}\n", r.k, r.sup_residual, r.ratio, oracle);
  }
  double worst_step = 0.0;
  for (std::size_t i = 0; i + 1 < scan.reports.size(); ++i) {
    const double q = scan.reports[i + 1].ratio / scan.reports[i].ratio;
    fmt::print("  ratio({})/ratio({}) = {:.4f}\n", scan.reports[i + 1].k, scan.reports[i].k, q);
    worst_step = std::max(worst_step, q);
  }
  fmt::print("  fitted decay exponent {:.4f}\n", scan.decay_exponent);
  c.expect(worst_step <= 0.75, fmt::format("every ratio(k+1)/ratio(k) <= 0.75 (worst {:.4f})", worst_step));
  c.expect(worst_rel <= 0.01, fmt::format("sups agree with the double-resolution oracle to 1% (worst {:.3e})", worst_rel));
}

// ---------------------------------------------------------------------------
// 4. commutator length chain

void criterion4(Checks& c) {
  Lemma2Options opt;
  opt.flow.dt = 1e-2;
  auto run_pair = [&](const std::string& label, const FieldExpr& h, const FieldExpr& k) {
    const Lemma2Report r = lemma2_check(h, k, opt);
    const double spread = r.max_over_tau - r.min_over_tau;
    const double chain = std::abs(r.max_over_tau - r.max_pullback_diff);
    c.expect(spread <= 1e-5, fmt::format("{}: tau spread of max L {} <= 1e-5", label, sci(spread)));
    c.expect(chain <= 1e-4, fmt::format("{}: |max L - max(H o psi_K - H)| {} <= 1e-4", label, sci(chain)));
    c.expect(r.max_pullback_diff <= r.max_bracket + 1e-6,
             fmt::format("{}: max(H o psi_K - H) = {:.6f} <= max{{H,K}} + 1e-6 = {:.6f}", label, r.max_pullback_diff,
                         r.max_bracket + 1e-6));
    c.expect(r.identity_residual <= 1e-6, fmt::format("{}: identity residual {} <= 1e-6", label, sci(r.identity_residual)));
    return r;
  };
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5; ++i) {
    const FieldExpr h = random_sparse_field(rng, 3, 0.15);
    const FieldExpr k = random_sparse_field(rng, 3, 0.15);
    run_pair(fmt::format("random pair {}", i + 1), h, k);
  }
  const Lemma2Report r = run_pair("sin/sin", kSinQ, kSinP);
  // closed-form shear psi_K(q, p) = (q + 2 pi cos 2 pi p, p) on a dense lattice
  double oracle = -1e300;
  const int n = 2048;
  for (int i = 0; i < n; ++i) {
    const double q = double(i) / n;
    for (int j = 0; j < n; ++j) {
      const double p = double(j) / n;
      oracle = std::max(oracle, std::sin(kTwoPi * (q + kTwoPi * std::cos(kTwoPi * p))) - std::sin(kTwoPi * q));
    }
  }
  c.expect(std::abs(oracle - 2.0) <= 1e-4 && std::abs(r.max_pullback_diff - 2.0) <= 1e-4,
           fmt::format("sin/sin: max(H o psi_K - H) = {:.9f}, closed-form lattice oracle {:.9f}, expected 2.0",
                       r.max_pullback_diff, oracle));
  c.expect(std::abs(r.max_bracket - kTwoPi * kTwoPi) <= 1e-6,
           fmt::format("sin/sin: max{{H,K}} = {:.9f}, expected 4 pi^2 = {:.9f}", r.max_bracket, kTwoPi * kTwoPi));
}

// ---------------------------------------------------------------------------
// 5. tamed triples

// Explicit closed-square membership from the grid's own centers and half-side.
bool covered_by(const ThickGrid& g, Point2 x) {
  for (const Point2 center : g.centers()) {
    double dq = std::abs(x.q - center.q);
    double dp = std::abs(x.p - center.p);
    dq = std::min(dq, 1.0 - dq);
    dp = std::min(dp, 1.0 - dp);
    if (dq <= g.c + 1e-12 && dp <= g.c + 1e-12) return true;
  }
  return false;
}

void criterion5(Checks& c) {
  for (int m : {1, 2, 4}) {
    const auto cover = build_cover(m);
    const double cm = 1.0 / (3 * m);
    bool shape_ok = true;
    for (int k = 0; k < 3; ++k) {
      shape_ok &= std::abs(cover[k].c - cm) <= 1e-15;
      shape_ok &= std::abs(cover[k].offset.q - k * cm) <= 1e-15 && std::abs(cover[k].offset.p - k * cm) <= 1e-15;
      shape_ok &= int(cover[k].centers().size()) == m * m;
    }
    const int n = 300 * m;
    long missed = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Point2 x{double(i) / n, double(j) / n};
        if (!covered_by(cover[0], x) && !covered_by(cover[1], x) && !covered_by(cover[2], x)) ++missed;
      }
    }
    c.expect(shape_ok && missed == 0,
             fmt::format("build_cover({}): offsets (0,0), (c,c), (2c,2c); {}x{} lattice, {} uncovered points", m, n, n,
                         missed));
  }

  std::mt19937_64 rng(505);
  const FieldExpr r1 = random_trig_field(rng, 2, 0.3);
  const FieldExpr r2 = random_trig_field(rng, 2, 0.3);
  const FieldExpr r3 = random_trig_field(rng, 2, 0.3);
  for (int m : {2, 3}) {
    const TripleCheck sin_chk = check_triple(tame_triple(kSinQ, kSinP, kSinQP, m), 512);
    const TripleCheck rnd_chk = check_triple(tame_triple(r1, r2, r3, m), 512);
    c.expect(sin_chk.sup <= 1e-9 && rnd_chk.sup <= 1e-9,
             fmt::format("m = {}: triple-bracket sup on 512^2, sin triple {}, random triple {} <= 1e-9", m,
                         sci(sin_chk.sup), sci(rnd_chk.sup)));
  }

  for (int m : {4, 6}) {
    const TamedTriple t = tame_triple(kSinQ, kSinP, kSinQP, m);
    const double cm = 1.0 / (3 * m);
    const double bound = kTwoPi * (2 * cm + 2 * t.eta);
    const double worst = std::max({t.c0_errors[0], t.c0_errors[1], t.c0_errors[2]});
    c.expect(worst <= bound * (1 + 1e-6),
             fmt::format("m = {}: C0 errors {:.6f} {:.6f} {:.6f} <= 2 pi (2c + 2 eta) = {:.6f}", m, t.c0_errors[0],
                         t.c0_errors[1], t.c0_errors[2], bound));
  }

  const TameSearch s = tame_to_epsilon(kSinQ, kSinP, kSinQP, 0.05, 12);
  for (std::size_t i = 0; i < s.m_tried.size(); ++i) {
    fmt::print("  sin triple, m = {:2}: worst C0 error {:.6f}\n", s.m_tried[i], s.max_error[i]);
  }
  c.expect(s.reached, fmt::format("epsilon = 0.05 for the sin triple reached with m <= 12 (best {:.6f})",
                                  s.max_error.empty() ? 0.0 : s.max_error.back()));
}

// ---------------------------------------------------------------------------
// 6. implant

void criterion6(Checks& c) {
  const auto seeds = default_seed_triple();
  const Theorem3Options opt;
  // right-hand side from plain lattice scans of the plane fields
  const GridSample seed = sample(triple_bracket(seeds[0], seeds[1], seeds[2]), opt.plane2_n, Domain::unit_square());
  const GridSample chi = sample(default_chi(), opt.plane1_n, Domain::unit_square());
  const double seed_sup = std::max(std::abs(seed.min()), std::abs(seed.max()));
  const double chi_max = std::max(std::abs(chi.min()), std::abs(chi.max()));
  const double rhs = chi_max * chi_max * chi_max * seed_sup;
  for (double delta : {0.1, 0.05, 0.025}) {
    const Theorem3Report r = theorem3_demo(seeds[0], seeds[1], seeds[2], delta, opt);
    c.expect(std::abs(r.unperturbed_sup - rhs) <= 1e-9 && rhs > 0.0,
             fmt::format("delta {}: unperturbed sup {:.12f} = max|chi^3| x seed sup {:.12f}", delta, r.unperturbed_sup,
                         rhs));
    c.expect(r.perturbed_sup <= 1e-9, fmt::format("delta {}: perturbed sup {} <= 1e-9 (m = {})", delta,
                                                  sci(r.perturbed_sup), r.m));
    const double worst = std::max({r.implant_dists[0], r.implant_dists[1], r.implant_dists[2]});
    c.expect(worst <= delta * chi_max + 1e-12,
             fmt::format("delta {}: C0 sizes {:.6f} {:.6f} {:.6f} <= delta max|chi| = {:.6f}", delta,
                         r.implant_dists[0], r.implant_dists[1], r.implant_dists[2], delta * chi_max));
  }
}

// ---------------------------------------------------------------------------
// 7. rigidity probe

namespace fs = std::filesystem;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rigidity-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  if (code != 0) fmt::print("  cli {} failed ({}): {}", args[1], code, err.str());
  return code;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("rlab_acceptance_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void criterion7(Checks& c) {
  const long budget = 10000;
  for (FamilyKind kind : {FamilyKind::trig_noise, FamilyKind::smoothing_blend, FamilyKind::tamed_lock}) {
    const std::string name = to_string(kind);
    const ExperimentRecord zero = perturb_search(kSinQ, kSinP, PerturbationFamily{kind, 0.0}, budget, 1);
    c.expect(zero.best_value == zero.baseline,
             fmt::format("{}: delta = 0 returns the baseline {:.12f} exactly", name, zero.baseline));

    const auto recs = nested_search(kSinQ, kSinP, kind, {0.1, 0.05, 0.025}, budget, 17);
    bool monotone = recs[2].best_value >= recs[1].best_value && recs[1].best_value >= recs[0].best_value;
    c.expect(monotone, fmt::format("{}: best values {:.6f} (0.1) <= {:.6f} (0.05) <= {:.6f} (0.025), baseline {:.6f}",
                                   name, recs[0].best_value, recs[1].best_value, recs[2].best_value, recs[0].baseline));
    double excess = -1.0;
    bool within_budget = true;
    for (const auto& r : recs) {
      const double df = sup_dist(r.best_f, kSinQ, 128, 20);
      const double dg = sup_dist(r.best_g, kSinP, 128, 20);
      excess = std::max({excess, df - r.delta, dg - r.delta});
      within_budget &= r.evaluations <= budget;
    }
    c.expect(excess <= 1e-9 && within_budget,
             fmt::format("{}: post-hoc sup_dist - delta = {} <= 1e-9, evaluations within budget", name, sci(excess)));
  }

  const fs::path dir = scratch("c7");
  auto once = [&](const std::string& tag) {
    const int code = run_cli({"perturb-search", "--f", "sin(2pi*(q))", "--g", "sin(2pi*(p))", "--delta", "0.1",
                              "--delta", "0.05", "--delta", "0.025", "--budget", std::to_string(budget), "--seed", "17",
                              "--family", "trig-noise", "--out", (dir / (tag + ".csv")).string(), "--svg",
                              (dir / (tag + ".svg")).string()});
    if (code != 0) return std::string();
    return read_text_file(dir / (tag + ".csv")) + "\n" + read_text_file(dir / (tag + ".svg"));
  };
  const std::string a = once("a");
  const std::string b = once("b");
  c.expect(!a.empty() && a == b, "perturb-search reruns with a fixed seed give byte-identical CSV and SVG");
}

// ---------------------------------------------------------------------------
// 8. end to end

bool well_formed_svg(const std::string& svg) {
  return svg.starts_with("<svg") && svg.find("viewBox=\"0 0 800 600\"") != std::string::npos &&
         svg.ends_with("</svg>\n");
}

void criterion8(Checks& c) {
  const fs::path dir = scratch("c8");
  write_text_file(dir / "fields.txt", "F = sin(2pi*(q))\nG = sin(2pi*(p))\nH = sin(2pi*(q + p))\n");
  const std::string fields = (dir / "fields.txt").string();
  const std::string f = fields + ":F";
  const std::string g = fields + ":G";
  const std::string h = fields + ":H";
  struct Command {
    std::string name;
    std::vector<std::string> args;
  };
  const std::vector<Command> commands = {
      {"commutator-scan", {"--f", f, "--g", g, "--kmin", "5", "--kmax", "7", "--n", "64", "--tau-samples", "8"}},
      {"hofer-check", {"--h", f, "--k", g, "--n", "32", "--refine", "5", "--quadrature-nodes", "32"}},
      {"tame", {"--f1", f, "--f2", g, "--f3", h, "--m", "2", "--check-n", "128", "--fields-out",
                (dir / "tamed.txt").string()}},
      {"implant-demo", {"--delta", "0.1", "--plane1-n", "24", "--plane2-n", "48", "--summary",
                        (dir / "implant.txt").string()}},
      {"perturb-search", {"--f", f, "--g", g, "--delta", "0.05", "--budget", "100", "--seed", "3"}},
  };
  for (const auto& cmd : commands) {
    const fs::path csv = dir / (cmd.name + ".csv");
    const fs::path svg = dir / (cmd.name + ".svg");
    std::vector<std::string> args{cmd.name};
    args.insert(args.end(), cmd.args.begin(), cmd.args.end());
    args.insert(args.end(), {"--out", csv.string(), "--svg", svg.string()});
    bool ok = run_cli(args) == 0;
    std::string detail;
    if (ok) {
      try {
        const CsvTable t = parse_csv(read_text_file(csv));
        ok &= !t.header.empty() && !t.rows.empty();
        for (const auto& row : t.rows) ok &= row.size() == t.header.size();
        ok &= well_formed_svg(read_text_file(svg));
        const fs::path replot = dir / (cmd.name + ".replot.svg");
        ok &= run_cli({"plot", "--in", csv.string(), "--out", replot.string(), "--kind", "line"}) == 0;
        ok &= well_formed_svg(read_text_file(replot));
        detail = fmt::format("{} rows", t.rows.size());
      } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
      }
    }
    c.expect(ok, fmt::format("{}: CSV and SVG well formed, CSV accepted by plot ({})", cmd.name, detail));
  }
  bool extras = true;
  try {
    extras &= load_field_file(dir / "tamed.txt").size() == 3;
    extras &= !read_text_file(dir / "implant.txt").empty();
  } catch (const std::exception&) {
    extras = false;
  }
  c.expect(extras, "tame field file and implant summary written");
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Checks&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "bracket engine identities and exact derivatives", 10, criterion1},
      {2, "flow integrator", 60, criterion2},
      {3, "dyadic commutator scan", 300, criterion3},
      {4, "commutator length chain", 120, criterion4},
      {5, "thick-grid covers and tamed triples", 120, criterion5},
      {6, "implanted triple brackets", 60, criterion6},
      {7, "rigidity probe", 600, criterion7},
      {8, "end-to-end CLI artifacts", 600, criterion8},
  };
  bool all = true;
  for (const auto& cr : criteria) {
    if (only != 0 && cr.id != only) continue;
    fmt::print("criterion {}: {}\n", cr.id, cr.title);
    std::fflush(stdout);
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("unexpected exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.expect(elapsed <= cr.budget_seconds, fmt::format("runtime {:.1f} s <= {:.0f} s", elapsed, cr.budget_seconds));
    fmt::print("{} criterion {}: {}\n", checks.passed() ? "PASS" : "FAIL", cr.id, cr.title);
    std::fflush(stdout);
    all &= checks.passed();
  }
  return all ? 0 : 1;
}
