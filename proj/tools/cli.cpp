#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/commutator.hpp"
#include "rlab/experiment.hpp"
#include "rlab/flow.hpp"
#include "rlab/grid.hpp"
#include "rlab/hofer.hpp"
#include "rlab/implant.hpp"
#include "rlab/io.hpp"
#include "rlab/parse.hpp"
#include "rlab/tamed.hpp"

namespace rlab::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_number(v); }

/// "path", "path:name" or an inline expression.
FieldExpr load_field_arg(const std::string& arg) {
  std::string path = arg;
  std::string name;
  if (!std::filesystem::exists(path)) {
    const auto colon = arg.rfind(':');
    if (colon != std::string::npos && std::filesystem::exists(arg.substr(0, colon))) {
      path = arg.substr(0, colon);
      name = arg.substr(colon + 1);
    } else {
      return parse_field(arg);
    }
  }
  const auto fields = load_field_file(path);
  if (fields.empty()) throw std::invalid_argument("no fields in " + path);
  if (name.empty()) return fields.front().field;
  for (const auto& f : fields) {
    if (f.name == name) return f.field;
  }
  throw std::invalid_argument(fmt::format("no field named '{}' in {}", name, path));
}

void emit(const CsvTable& table, const std::string& csv_path, const std::string& svg_path, const std::string& svg) {
  if (!csv_path.empty()) write_text_file(csv_path, to_csv(table));
  if (!svg_path.empty()) write_text_file(svg_path, svg);
}

struct FlowOptions {
  double dt = 1e-3;
  double fp_tol = 1e-13;
  int fp_max_iters = 100;
  int stages = 3;

  void add_to(CLI::App* app) {
    app->add_option("--dt", dt, "integration step (<= 1e-2)")->capture_default_str();
    app->add_option("--fp-tol", fp_tol, "fixed-point tolerance (<= 1e-10)")->capture_default_str();
    app->add_option("--fp-max-iters", fp_max_iters, "fixed-point iteration cap")->capture_default_str();
    app->add_option("--stages", stages, "Gauss-Legendre stages (1 = implicit midpoint)")->capture_default_str();
  }
  FlowParams params() const { return {dt, fp_tol, fp_max_iters, stages}; }
};

struct Outputs {
  std::string csv;
  std::string svg;

  void add_to(CLI::App* app) {
    app->add_option("--out", csv, "CSV output path");
    app->add_option("--svg", svg, "SVG output path");
  }
};

// {f, g} folded left over a word in the letters f and g, e.g. "fgg" = {{f, g}, g}.
FieldExpr nested_bracket(const FieldExpr& f, const FieldExpr& g, const std::string& word) {
  if (word.size() < 2) throw std::invalid_argument("--nested needs at least two letters");
  auto pick = [&](char c) {
    if (c == 'f') return f;
    if (c == 'g') return g;
    throw std::invalid_argument("--nested may only contain the letters f and g");
  };
  FieldExpr acc = pick(word[0]);
  for (std::size_t i = 1; i < word.size(); ++i) acc = poisson(acc, pick(word[i]));
  return acc;
}

CsvTable lattice_table(const GridSample& g) {
  CsvTable t{{"i", "j", "q", "p", "value"}, {}};
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const Point2 x = g.point(i, j);
      t.rows.push_back({std::to_string(i), std::to_string(j), num(x.q), num(x.p), num(g.at(i, j))});
    }
  }
  return t;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical workbench for Poisson brackets, Hamiltonian flows and their C0 behaviour",
               "rigidity-lab"};
  // -h would clash with the --h option of flow and hofer-check.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  std::function<void()> action;

  // bracket
  struct {
    std::string f, g, nested = "fg", out_csv, out_svg;
    int n = 64;
    int refine = 20;
  } br;
  auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two fields: extrema and a lattice");
  bracket->add_option("--f", br.f, "field file[:name] or inline expression")->required();
  bracket->add_option("--g", br.g, "field file[:name] or inline expression")->required();
  bracket->add_option("--nested", br.nested, "left-nested bracket word over f and g, e.g. fgg")->capture_default_str();
  bracket->add_option("--n", br.n, "lattice resolution (>= 32)")->capture_default_str();
  bracket->add_option("--refine", br.refine, "refinement rounds")->capture_default_str();
  bracket->add_option("--out", br.out_csv, "CSV output path (i, j, q, p, value)");
  bracket->add_option("--svg", br.out_svg, "SVG heatmap path");
  bracket->callback([&] {
    action = [&] {
      if (br.n < 32) throw std::invalid_argument("--n must be >= 32");
      const FieldExpr b = nested_bracket(load_field_arg(br.f), load_field_arg(br.g), br.nested);
      const Extrema e = extrema(b, br.n, br.refine);
      fmt::print(out, "max {} at ({}, {})\nmin {} at ({}, {})\n", num(e.max), num(e.argmax.q), num(e.argmax.p),
                 num(e.min), num(e.argmin.q), num(e.argmin.p));
      if (e.max_upper) fmt::print(out, "max upper bound {}\nmin lower bound {}\n", num(*e.max_upper), num(*e.min_lower));
      const GridSample g = sample(b, br.n);
      emit(lattice_table(g), br.out_csv, br.out_svg, svg_heatmap(g.n, g.n, g.values, "bracket " + br.nested));
    };
  });

  // flow
  struct {
    std::string h, points, out_csv, out_svg;
    double t = 1.0;
    FlowOptions flow;
  } fl;
  auto* flow = app.add_subcommand("flow", "Advance points along a Hamiltonian flow");
  flow->add_option("--h", fl.h, "Hamiltonian: field file[:name] or inline expression")->required();
  flow->add_option("--t", fl.t, "flow time (negative integrates backward)")->capture_default_str();
  flow->add_option("--points", fl.points, "CSV with columns q, p")->required();
  fl.flow.add_to(flow);
  flow->add_option("--out", fl.out_csv, "CSV output path");
  flow->add_option("--svg", fl.out_svg, "SVG plot of the energy drift per point");
  flow->callback([&] {
    action = [&] {
      const FieldExpr h = load_field_arg(fl.h);
      const FlowSpec spec(h, fl.flow.params());
      const CsvTable pts = parse_csv(read_text_file(fl.points));
      const int cq = pts.column("q");
      const int cp = pts.column("p");
      if (cq < 0 || cp < 0) throw std::invalid_argument("points file needs columns q and p");
      CsvTable t{{"index", "q0", "p0", "q", "p", "energy_drift"}, {}};
      Series drift{"energy_drift", {}, {}};
      for (std::size_t i = 0; i < pts.rows.size(); ++i) {
        const Point2 x{std::stod(pts.rows[i][cq]), std::stod(pts.rows[i][cp])};
        const Point2 y = advance(spec, x, fl.t);
        const double d = h(y) - h(x);
        t.rows.push_back({std::to_string(i), num(x.q), num(x.p), num(y.q), num(y.p), num(d)});
        drift.x.push_back(double(i));
        drift.y.push_back(d);
        fmt::print(out, "{} {} -> {} {}\n", num(x.q), num(x.p), num(y.q), num(y.p));
      }
      emit(t, fl.out_csv, fl.out_svg, svg_line_plot({drift}, "energy drift", "index", "H(x(T)) - H(x(0))"));
    };
  });

  // commutator-scan
  struct {
    std::string f, g;
    int kmin = 2, kmax = 8, n = 128, tau = 16;
    FlowOptions flow;
    Outputs o;
  } cs;
  auto* scan = app.add_subcommand("commutator-scan", "Dyadic scan of the commutator residual for s = t = 2^-k");
  scan->add_option("--f", cs.f, "F: field file[:name] or inline expression")->required();
  scan->add_option("--g", cs.g, "G: field file[:name] or inline expression")->required();
  scan->add_option("--kmin", cs.kmin)->capture_default_str();
  scan->add_option("--kmax", cs.kmax)->capture_default_str();
  scan->add_option("--n", cs.n, "lattice resolution (>= 64)")->capture_default_str();
  scan->add_option("--tau-samples", cs.tau, "tau lattice size (>= 8)")->capture_default_str();
  cs.flow.add_to(scan);
  cs.o.add_to(scan);
  scan->callback([&] {
    action = [&] {
      const DyadicScan r =
          dyadic_scan(load_field_arg(cs.f), load_field_arg(cs.g), cs.kmin, cs.kmax, cs.n, cs.tau, cs.flow.params());
      CsvTable t{{"k", "s", "t", "sup_residual", "ratio", "N", "tau_samples"}, {}};
      Series ratio{"log2 ratio", {}, {}};
      for (const auto& rep : r.reports) {
        t.rows.push_back({std::to_string(rep.k), num(rep.s), num(rep.t), num(rep.sup_residual), num(rep.ratio),
                          std::to_string(rep.n), std::to_string(rep.tau_samples)});
        ratio.x.push_back(rep.k);
        ratio.y.push_back(std::log2(rep.ratio));
        fmt::print(out, "k={} sup={} ratio={}\n", rep.k, num(rep.sup_residual), num(rep.ratio));
      }
      fmt::print(out, "fitted decay exponent {}\n", num(r.decay_exponent));
      emit(t, cs.o.csv, cs.o.svg, svg_line_plot({ratio}, "commutator residual", "k", "log2(sup / st)"));
    };
  });

  // hofer-check
  struct {
    std::string h, k;
    Lemma2Options opt;
    FlowOptions flow;
    Outputs o;
  } hc;
  hc.flow.dt = 1e-2;
  auto* hofer = app.add_subcommand("hofer-check", "Length bounds for the commutator of two autonomous flows");
  hofer->add_option("--h", hc.h, "H: field file[:name] or inline expression")->required();
  hofer->add_option("--k", hc.k, "K: field file[:name] or inline expression")->required();
  hofer->add_option("--n", hc.opt.n, "lattice resolution")->capture_default_str();
  hofer->add_option("--tau-samples", hc.opt.tau_samples)->capture_default_str();
  hofer->add_option("--refine", hc.opt.refine_iters)->capture_default_str();
  hofer->add_option("--quadrature-nodes", hc.opt.quadrature_nodes)->capture_default_str();
  hofer->add_option("--seed", hc.opt.seed)->capture_default_str();
  hc.flow.add_to(hofer);
  hc.o.add_to(hofer);
  hofer->callback([&] {
    action = [&] {
      hc.opt.flow = hc.flow.params();
      const Lemma2Report r = lemma2_check(load_field_arg(hc.h), load_field_arg(hc.k), hc.opt);
      fmt::print(out,
                 "upper bounds only: lengths of explicit paths\n"
                 "max_over_tau_of_gridmax_L {}\nmin_over_tau_of_gridmax_L {}\nmax_H_pullback_diff {}\n"
                 "max_bracket {}\nidentity_residual {}\n",
                 num(r.max_over_tau), num(r.min_over_tau), num(r.max_pullback_diff), num(r.max_bracket),
                 num(r.identity_residual));
      CsvTable t{{"tau", "max_L", "max_H_pullback_diff", "max_bracket", "identity_residual"}, {}};
      Series s{"max_x L(x, tau)", r.tau, r.max_per_tau};
      Series b{"max(H o psi_K - H)", r.tau, std::vector<double>(r.tau.size(), r.max_pullback_diff)};
      for (std::size_t i = 0; i < r.tau.size(); ++i) {
        t.rows.push_back({num(r.tau[i]), num(r.max_per_tau[i]), num(r.max_pullback_diff), num(r.max_bracket),
                          num(r.identity_residual)});
      }
      emit(t, hc.o.csv, hc.o.svg, svg_line_plot({s, b}, "commutator generator maxima", "tau", ""));
    };
  });

  // tame
  struct {
    std::string f1, f2, f3, fields_out;
    int m = 2, m_max = 12, check_n = 256;
    double eta = 0.0, epsilon = 0.0;
    bool chart = false;
    Outputs o;
  } tm;
  auto* tame_cmd = app.add_subcommand("tame", "Tamed approximations of three fields on three thick grids");
  tame_cmd->add_option("--f1", tm.f1)->required();
  tame_cmd->add_option("--f2", tm.f2)->required();
  tame_cmd->add_option("--f3", tm.f3)->required();
  tame_cmd->add_option("--m", tm.m, "grid parameter, c = 1/(3m)")->capture_default_str();
  tame_cmd->add_option("--eta", tm.eta, "plateau margin in (0, c/4); default c/8");
  tame_cmd->add_option("--epsilon", tm.epsilon, "increase m from --m until every C0 error is <= epsilon");
  tame_cmd->add_option("--m-max", tm.m_max, "largest m tried with --epsilon")->capture_default_str();
  tame_cmd->add_option("--check-n", tm.check_n, "lattice for the triple-bracket check")->capture_default_str();
  tame_cmd->add_flag("--chart", tm.chart, "work on the unit square instead of the torus");
  tame_cmd->add_option("--fields-out", tm.fields_out, "field file for the tamed fields");
  tm.o.add_to(tame_cmd);
  tame_cmd->callback([&] {
    action = [&] {
      const FieldExpr f1 = load_field_arg(tm.f1);
      const FieldExpr f2 = load_field_arg(tm.f2);
      const FieldExpr f3 = load_field_arg(tm.f3);
      CsvTable t{{"m", "c", "eta", "c0_error_1", "c0_error_2", "c0_error_3", "triple_sup", "unlocked_points"}, {}};
      Series e1{"c0_error_1", {}, {}};
      Series e2{"c0_error_2", {}, {}};
      Series e3{"c0_error_3", {}, {}};
      TamedTriple last;
      bool reached = false;
      const int m_end = tm.epsilon > 0.0 ? tm.m_max : tm.m;
      for (int m = tm.m; m <= m_end; ++m) {
        last = tm.chart ? square_tame_triple(f1, f2, f3, m, tm.eta) : tame_triple(f1, f2, f3, m, tm.eta);
        const TripleCheck chk = check_triple(last, tm.check_n);
        t.rows.push_back({std::to_string(m), num(last.grids[0].c), num(last.eta), num(last.c0_errors[0]),
                          num(last.c0_errors[1]), num(last.c0_errors[2]), num(chk.sup),
                          std::to_string(chk.unlocked_points)});
        e1.x.push_back(m);
        e1.y.push_back(last.c0_errors[0]);
        e2.x.push_back(m);
        e2.y.push_back(last.c0_errors[1]);
        e3.x.push_back(m);
        e3.y.push_back(last.c0_errors[2]);
        fmt::print(out, "m={} c0 errors {} {} {} triple-bracket sup {}\n", m, num(last.c0_errors[0]),
                   num(last.c0_errors[1]), num(last.c0_errors[2]), num(chk.sup));
        const double worst = std::max({last.c0_errors[0], last.c0_errors[1], last.c0_errors[2]});
        if (tm.epsilon > 0.0 && worst <= tm.epsilon) {
          reached = true;
          break;
        }
      }
      if (tm.epsilon > 0.0) {
        fmt::print(out, reached ? "epsilon {} reached at m={}\n" : "epsilon {} not reached up to m={}\n",
                   num(tm.epsilon), last.m);
      }
      if (!tm.fields_out.empty()) {
        save_field_file(tm.fields_out, {{"f1_tamed", last.fields[0]}, {"f2_tamed", last.fields[1]},
                                        {"f3_tamed", last.fields[2]}},
                        fmt::format("tamed fields, m = {}, eta = {}", last.m, num(last.eta)));
      }
      emit(t, tm.o.csv, tm.o.svg, svg_line_plot({e1, e2, e3}, "taming error", "m", "sup |f' - f|"));
    };
  });

  // implant-demo
  struct {
    std::vector<double> deltas = {0.1};
    std::string summary;
    Theorem3Options opt;
    Outputs o;
  } im;
  auto* implant = app.add_subcommand("implant-demo", "Implant the default seed triple into a 4D chart and tame it");
  implant->add_option("--delta", im.deltas, "C0 budget for the tamed seeds (repeatable)")->capture_default_str();
  implant->add_option("--plane1-n", im.opt.plane1_n)->capture_default_str();
  implant->add_option("--plane2-n", im.opt.plane2_n)->capture_default_str();
  implant->add_option("--m-max", im.opt.m_max)->capture_default_str();
  implant->add_option("--summary", im.summary, "text summary path");
  im.o.add_to(implant);
  implant->callback([&] {
    action = [&] {
      const auto seeds = default_seed_triple();
      CsvTable t{{"delta", "m", "seed_triple_sup", "chi_cubed_sup", "chi_sup", "unperturbed_sup", "perturbed_sup",
                  "c0_error_1", "c0_error_2", "c0_error_3", "implant_dist_1", "implant_dist_2", "implant_dist_3"},
                 {}};
      Series d1{"implant_dist_1", {}, {}};
      Series bound{"delta * max|chi|", {}, {}};
      std::string text;
      Theorem3Options opt = im.opt;
      for (double delta : im.deltas) {
        const Theorem3Report r = theorem3_demo(seeds[0], seeds[1], seeds[2], delta, opt);
        t.rows.push_back({num(r.delta), std::to_string(r.m), num(r.seed_triple_sup), num(r.chi_cubed_sup),
                          num(r.chi_sup), num(r.unperturbed_sup), num(r.perturbed_sup), num(r.c0_errors[0]),
                          num(r.c0_errors[1]), num(r.c0_errors[2]), num(r.implant_dists[0]), num(r.implant_dists[1]),
                          num(r.implant_dists[2])});
        d1.x.push_back(delta);
        d1.y.push_back(r.implant_dists[0]);
        bound.x.push_back(delta);
        bound.y.push_back(delta * r.chi_sup);
        text += fmt::format(
            "delta {}: triple bracket of the implanted seeds {} (max|chi|^3 x seed sup = {}), after taming with m={} "
            "{}; C0 errors {} {} {}{}\n",
            num(delta), num(r.unperturbed_sup), num(r.chi_cubed_sup * r.seed_triple_sup), r.m, num(r.perturbed_sup),
            num(r.c0_errors[0]), num(r.c0_errors[1]), num(r.c0_errors[2]),
            r.tamed_within_delta ? "" : " (delta not reached)");
      }
      out << text;
      if (!im.summary.empty()) write_text_file(im.summary, text);
      emit(t, im.o.csv, im.o.svg, svg_line_plot({d1, bound}, "implant perturbation size", "delta", ""));
    };
  });

  // perturb-search and triple-search
  struct Search {
    std::string f, g, family = "trig-noise";
    std::vector<double> deltas = {0.1, 0.05, 0.025};
    long budget = 1000;
    std::uint64_t seed = 1;
    int n = 32;
    int refine = 3;
    Outputs o;
  };
  Search ps;
  Search ts;
  auto add_search = [&](CLI::App* cmd, Search& s) {
    cmd->add_option("--f", s.f)->required();
    cmd->add_option("--g", s.g)->required();
    cmd->add_option("--delta", s.deltas, "C0 radius (repeatable)")->capture_default_str();
    cmd->add_option("--budget", s.budget, "objective evaluations per delta (>= 100)")->capture_default_str();
    cmd->add_option("--seed", s.seed)->capture_default_str();
    cmd->add_option("--family", s.family, "trig-noise | tamed-lock | smoothing-blend")->capture_default_str();
    cmd->add_option("--n", s.n, "objective lattice (>= 32)")->capture_default_str();
    cmd->add_option("--refine", s.refine, "objective refinement rounds")->capture_default_str();
    s.o.add_to(cmd);
  };
  auto search_table = [&](const Search& s, const std::vector<ExperimentRecord>& recs, const std::string& label) {
    CsvTable t{{"delta", "best_value", "baseline", "evaluations", "f_dist", "g_dist", "seed", "family", "label"}, {}};
    for (const auto& r : recs) {
      t.rows.push_back({num(r.delta), num(r.best_value), num(r.baseline), std::to_string(r.evaluations),
                        num(r.f_dist), num(r.g_dist), std::to_string(r.seed), s.family, label});
    }
    return t;
  };
  auto search_plot = [&](const std::vector<ExperimentRecord>& recs, const std::string& title) {
    Series best{"best_value", {}, {}};
    Series base{"baseline", {}, {}};
    for (const auto& r : recs) {
      best.x.push_back(r.delta);
      best.y.push_back(r.best_value);
      base.x.push_back(r.delta);
      base.y.push_back(r.baseline);
    }
    return svg_line_plot({best, base}, title, "delta", "");
  };
  auto* perturb = app.add_subcommand("perturb-search", "Search C0-small perturbations minimizing max {F', G'}");
  add_search(perturb, ps);
  perturb->callback([&] {
    action = [&] {
      if (ps.n < 32) throw std::invalid_argument("--n must be >= 32");
      const SearchOptions opt{ps.n, ps.refine, Objective::bracket_max};
      const auto recs = nested_search(load_field_arg(ps.f), load_field_arg(ps.g), parse_family(ps.family), ps.deltas,
                                      ps.budget, ps.seed, opt);
      fmt::print(out, "best values are upper bounds for the infimum over each ball\n");
      for (const auto& r : recs) {
        fmt::print(out, "delta {} best {} baseline {} evaluations {}\n", num(r.delta), num(r.best_value),
                   num(r.baseline), r.evaluations);
      }
      emit(search_table(ps, recs, "probe"), ps.o.csv, ps.o.svg, search_plot(recs, "max {F', G'} over the ball"));
    };
  });
  auto* triple = app.add_subcommand("triple-search", "EXPLORATORY: search perturbations minimizing max {{F', G'}, G'}");
  add_search(triple, ts);
  triple->callback([&] {
    action = [&] {
      if (ts.n < 32) throw std::invalid_argument("--n must be >= 32");
      const FieldExpr f = load_field_arg(ts.f);
      const FieldExpr g = load_field_arg(ts.g);
      std::vector<ExperimentRecord> recs;
      for (double d : ts.deltas) {
        const PerturbationFamily fam{parse_family(ts.family), d};
        recs.push_back(triple_search(f, g, fam, ts.budget, ts.seed, {ts.n, ts.refine, Objective::triple_max}));
      }
      fmt::print(out, "EXPLORATORY: no expected value exists for this quantity\n");
      for (const auto& r : recs) {
        fmt::print(out, "delta {} best {} baseline {} evaluations {}\n", num(r.delta), num(r.best_value),
                   num(r.baseline), r.evaluations);
      }
      emit(search_table(ts, recs, "EXPLORATORY"), ts.o.csv, ts.o.svg,
           search_plot(recs, "EXPLORATORY: max {{F', G'}, G'} over the ball"));
    };
  });

  // plot
  struct {
    std::string in, out, kind = "line", title;
  } pl;
  auto* plot = app.add_subcommand("plot", "Render a CSV table as an SVG plot");
  plot->add_option("--in", pl.in, "CSV input")->required();
  plot->add_option("--out", pl.out, "SVG output")->required();
  plot->add_option("--kind", pl.kind, "line | heatmap")->check(CLI::IsMember({"line", "heatmap"}))->capture_default_str();
  plot->add_option("--title", pl.title);
  plot->callback([&] {
    action = [&] {
      const CsvTable t = parse_csv(read_text_file(pl.in));
      write_text_file(pl.out, plot_csv(t, pl.kind == "line" ? PlotKind::line : PlotKind::heatmap, pl.title));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsageError;
  }
  try {
    if (action) action();
    return kOk;
  } catch (const FlowError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace rlab::cli
