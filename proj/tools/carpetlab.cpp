#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "carpetlab/energy.hpp"
#include "carpetlab/exact.hpp"
#include "carpetlab/report.hpp"
#include "carpetlab/resistance.hpp"
#include "carpetlab/special.hpp"
#include "carpetlab/verify.hpp"

using namespace carpetlab;

namespace {

namespace fs = std::filesystem;

struct Cli {
  Config cfg;
  std::string config_file;
};

void ensure_out_dir(const Config& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const Config& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void emit(const Config& cfg, const std::string& stem, Json j) {
  j["provenance"] = provenance(cfg);
  ensure_out_dir(cfg);
  write_json_file(out_path(cfg, stem + ".json"), j);
  std::printf("wrote %s\n", out_path(cfg, stem + ".json").c_str());
}

void emit_csv(const Config& cfg, const std::string& stem, const std::string& body) {
  ensure_out_dir(cfg);
  write_text(out_path(cfg, stem + ".csv"), body);
  std::printf("wrote %s\n", out_path(cfg, stem + ".csv").c_str());
}

double rho_or_default(const Config& cfg, double fallback) {
  return cfg.rho_override > 0 ? cfg.rho_override : fallback;
}

int cmd_graph(const Config& cfg, int level, const std::string& mode_s, const std::string& kind,
              bool with_nodes) {
  const Mode mode = mode_s == "cross" ? Mode::cross : Mode::sc;
  Graph g;
  if (kind == "cell") {
    g = cell_graph(level, mode, cfg.max_level + 1);
  } else {
    g = vertex_graph(level, mode, cfg.max_level);
  }
  ensure_out_dir(cfg);
  const std::string name =
      "graph_" + kind + "_" + mode_name(mode) + "_" + std::to_string(level) + ".txt";
  write_graph(out_path(cfg, name), g, with_nodes);
  std::printf("wrote %s (%d nodes, %zu edges)\n", out_path(cfg, name).c_str(), g.node_count(),
              g.edges.size());
  return 0;
}

int cmd_resistance(const Config& cfg, int n_max) {
  const SolveOptions opt = cfg.solve_options();
  const auto corner = corner_resistances(n_max, opt);
  const auto cells = cell_resistances(n_max, opt);

  Json j;
  j["corner"] = {{"RV", to_json(corner.RV)},
                 {"R01", to_json(corner.R01)},
                 {"R15", to_json(corner.R15)},
                 {"R04", to_json(corner.R04)},
                 {"symmetry_gap", corner.symmetry_gap}};
  j["cell"] = {{"N01", to_json(cells.N01)},
               {"N04", to_json(cells.N04)},
               {"N15", to_json(cells.N15)},
               {"symmetry_gap", cells.symmetry_gap}};

  bool estimated = false;
  if (n_max >= 3) {
    const auto est = estimate_rho(corner.RV);
    j["rho"] = to_json(est);
    j["rho"]["literature_window"] = {1.25147, 1.25149};
    j["multiplicativity_RV"] = to_json(multiplicativity_check(corner.RV));
    if (n_max >= 4) {
      const auto ci = estimate_rho_increment(corner.RV);
      const auto ni = estimate_rho_increment(cells.N01);
      j["rho_increment"] = {{"corner", to_json(ci)}, {"cell", to_json(ni)}};
      j["beta_star_agreement"] =
          std::abs(ci.beta_star_hat - ni.beta_star_hat) / ci.beta_star_hat;
    }
    estimated = true;
    std::printf("rho_hat = %.6f, beta*_hat = %.6f (hard bounds %s, soft window %s)\n",
                est.rho_hat, est.beta_star_hat, est.in_hard_bounds ? "ok" : "VIOLATED",
                est.in_soft_window ? "ok" : "missed");
  } else {
    std::printf("fewer than 3 levels: resistances reported, estimation skipped\n");
  }
  for (std::size_t i = 0; i < corner.RV.values.size(); ++i) {
    std::printf("  n=%d RV=%.9g R01=%.9g R15=%.9g R04=%.9g N01=%.9g N04=%.9g N15=%.9g\n",
                corner.RV.levels[i], corner.RV.values[i], corner.R01.values[i],
                corner.R15.values[i], corner.R04.values[i], cells.N01.values[i],
                cells.N04.values[i], cells.N15.values[i]);
  }
  emit(cfg, "resistance", j);
  if (cfg.format == "csv") {
    emit_csv(cfg, "resistance_RV", series_csv(corner.RV));
    emit_csv(cfg, "resistance_N01", series_csv(cells.N01));
  }
  return estimated ? 0 : 0;
}

int cmd_identities(const Config& cfg, bool inject_fault) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::printf("%-54s %s\n", name.c_str(), ok ? "ok" : "MISMATCH");
    if (!ok) ++failures;
  };

  const int cap = cfg.rational_cap_level;
  for (int n = 1; n <= 8; ++n) {
    if (n > cap) {
      std::printf("good_energy(%d): skipped (beyond rational capacity %d)\n", n, cap);
      continue;
    }
    Rat got = good_energy(n, cap);
    if (inject_fault && n == 3) got += rat(1, 1000000);
    report("good_energy(" + std::to_string(n) + ") == (6/7)^n",
           got == rat_pow(rat(6, 7), n));
  }
  for (int n = 1; n <= 8; ++n) {
    if (n > cap) {
      std::printf("cantor_energy(%d): skipped (beyond rational capacity %d)\n", n, cap);
      continue;
    }
    report("cantor_energy(" + std::to_string(n) + ") == (2/3)^n",
           cantor_energy(n, cap) == rat_pow(rat(2, 3), n));
  }
  {
    const auto m = phi_minimize();
    report("phi minimum at (2/7, 5/7)", m.x == rat(2, 7) && m.y == rat(5, 7));
    report("phi minimum value 6/7", m.value == rat(6, 7) && phi_eval(m.x, m.y) == m.value);
  }
  {
    Rng rng(cfg.seed);
    for (int n = 1; n <= 4; ++n) {
      const Graph fine = vertex_graph(n + 1);
      const Graph coarse = vertex_graph(n);
      std::vector<Rat> u(static_cast<std::size_t>(fine.node_count()));
      for (auto& v : u) v = rat(static_cast<long>(rng.below(129)) - 64, 16);
      Rat total(0);
      for (int d = 0; d < 8; ++d) {
        std::vector<Rat> sub(static_cast<std::size_t>(coarse.node_count()));
        const std::int64_t ox = 2 * ipow3(n) * kOffX[d], oy = 2 * ipow3(n) * kOffY[d];
        for (std::int32_t i = 0; i < coarse.node_count(); ++i) {
          const auto p = coarse.points[static_cast<std::size_t>(i)];
          sub[static_cast<std::size_t>(i)] =
              u[static_cast<std::size_t>(fine.find_node({p.x + ox, p.y + oy}))];
        }
        total += energy_D<Rat>(coarse, sub);
      }
      report("self-similar decomposition D_" + std::to_string(n + 1) + " = sum D_" +
                 std::to_string(n) + "(u o f_i)",
             total == energy_D<Rat>(fine, u));
    }
  }
  std::printf(failures == 0 ? "identities: all exact checks passed\n"
                            : "identities: %d exact mismatches\n",
              failures);
  return failures == 0 ? 0 : 1;
}

int cmd_energy(const Config& cfg, const std::string& func, double beta, int n_max) {
  const SolveOptions opt = cfg.solve_options();
  std::vector<double> D, a, b;
  std::vector<int> b_levels;
  const double rho = rho_or_default(cfg, func == "good" ? 7.0 / 6.0 : 1.2515);

  Field<double> field;
  if (func == "good") {
    field = [](std::int64_t xn, std::int64_t, std::int64_t den) { return f_real(xn, den); };
    for (int n = 1; n <= n_max; ++n) D.push_back(good_energy(n, cfg.rational_cap_level).get_d());
  } else if (func == "x") {
    field = [](std::int64_t xn, std::int64_t, std::int64_t den) {
      return static_cast<double>(xn) / static_cast<double>(den);
    };
    for (int n = 1; n <= n_max; ++n) {
      const Graph g = vertex_graph(n, Mode::sc, cfg.max_level);
      std::vector<double> u(static_cast<std::size_t>(g.node_count()));
      for (std::int32_t i = 0; i < g.node_count(); ++i)
        u[static_cast<std::size_t>(i)] =
            static_cast<double>(g.points[static_cast<std::size_t>(i)].x) /
            static_cast<double>(g.scale_den);
      D.push_back(energy_D<double>(g, u));
    }
  } else if (func == "harmonic") {
    const auto fam = good_function_limit(n_max, opt);
    const auto& fine = fam.levels.back();
    for (int n = 1; n <= n_max; ++n) {
      const auto& gn = fam.levels[static_cast<std::size_t>(n - 1)].graph;
      const auto un = restrict_vertex_function(fine.graph, fine.sol.u, gn);
      D.push_back(energy_D<double>(gn, un));
    }
  } else {
    std::fprintf(stderr, "unknown function '%s' (good|x|harmonic)\n", func.c_str());
    return 2;
  }
  for (int n = 1; n <= n_max; ++n) a.push_back(std::pow(rho, n) * D[static_cast<std::size_t>(n - 1)]);
  if (field) {
    for (int n = 1; n <= n_max && n + cfg.avg_depth_offset <= 9; ++n) {
      const Graph cg = cell_graph(n, Mode::sc, cfg.max_level + 1);
      b_levels.push_back(n);
      b.push_back(std::pow(rho, n) *
                  energy_D<double>(cg, cell_average<double>(field, n, n + cfg.avg_depth_offset)));
    }
  }

  const auto sums = series_E(D, beta);
  Json j;
  j["function"] = func;
  j["beta"] = beta;
  j["rho"] = rho;
  j["levels"] = [&] {
    std::vector<int> ls;
    for (int n = 1; n <= n_max; ++n) ls.push_back(n);
    return ls;
  }();
  j["D"] = D;
  j["a"] = a;
  j["b_levels"] = b_levels;
  j["b"] = b;
  j["partial_sum"] = sums.partial;
  j["sup_form"] = sup_form(D, beta);
  emit(cfg, "energy_" + func, j);

  if (cfg.format == "csv") {
    std::string csv = "level,D,a,b,partial_sum\n";
    char buf[160];
    for (int n = 1; n <= n_max; ++n) {
      const std::size_t i = static_cast<std::size_t>(n - 1);
      if (i < b.size())
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", n, D[i], a[i], b[i],
                      sums.partial[i]);
      else
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,,%.17g\n", n, D[i], a[i], sums.partial[i]);
      csv += buf;
    }
    emit_csv(cfg, "energy_" + func, csv);
  }
  return 0;
}

int cmd_good_function(const Config& cfg, int n_max) {
  const SolveOptions opt = cfg.solve_options();
  const auto fam = good_function_limit(n_max, opt);
  const double rho = rho_or_default(cfg, 1.2515);

  Json j;
  std::vector<double> energies, sym, mid, an;
  for (const auto& lvl : fam.levels) {
    energies.push_back(lvl.sol.energy);
    sym.push_back(lvl.symmetry_residual);
    mid.push_back(lvl.midline_residual);
  }
  const auto& fine = fam.levels.back();
  for (int n = 1; n <= n_max; ++n) {
    const auto& gn = fam.levels[static_cast<std::size_t>(n - 1)].graph;
    const auto un = restrict_vertex_function(fine.graph, fine.sol.u, gn);
    an.push_back(std::pow(rho, n) * energy_D<double>(gn, un));
  }
  j["levels"] = n_max;
  j["rho"] = rho;
  j["energy"] = energies;
  j["symmetry_residual"] = sym;
  j["midline_residual"] = mid;
  j["sup_diff_interior"] = fam.sup_diff_interior;
  j["a_n_of_u_nmax"] = an;
  emit(cfg, "good_function", j);
  return 0;
}

int cmd_green(const Config& cfg, std::int64_t zx, std::int64_t zy, std::vector<int> radii) {
  if (radii.empty()) radii = {3, 9, 27, 81};
  const auto rep = vinfty_scaling({zx, zy}, radii, cfg.solve_options());
  Json j = to_json(rep);
  const double rho = rho_or_default(cfg, 1.2515);
  j["gamma_reference"] = std::log(rho) / std::log(3.0);
  emit(cfg, "green_scaling", j);
  std::printf("gamma_g = %.4f, gamma_R = %.4f, reference log(rho)/log(3) = %.4f\n", rep.gamma_g,
              rep.gamma_R, j["gamma_reference"].get<double>());
  return 0;
}

int cmd_verify(const Config& cfg, const std::string& suite) {
  const SolveOptions opt = cfg.solve_options();
  const double rho = rho_or_default(cfg, 1.2515);
  int hard_failures = 0;

  if (suite == "monotonicity") {
    const auto fam = good_function_limit(std::min(cfg.max_level, 5), opt);
    const auto ra = monotonicity_a(fam, rho);
    const auto rb = monotonicity_B(4, 100, cfg.seed, rho);
    for (double r : ra.ratios)
      if (!std::isfinite(r)) ++hard_failures;
    for (double r : rb.ratios)
      if (!std::isfinite(r)) ++hard_failures;
    Json j;
    j["a"] = to_json(ra);
    j["B"] = to_json(rb);
    emit(cfg, "verify_monotonicity", j);
  } else if (suite == "harnack") {
    HarnackConfig hc;
    hc.levels.clear();
    for (int n = 3; n <= std::min(cfg.max_level, 6); ++n) hc.levels.push_back(n);
    hc.seed = cfg.seed;
    const auto rep = harnack_ratios(hc, opt);
    emit(cfg, "verify_harnack", to_json(rep));
    std::printf("C_H stability across levels: %.4f (%s)\n", rep.stability,
                rep.stable ? "stable" : "drifted");
  } else if (suite == "equivalence") {
    const double beta_star = beta_star_of(rho);
    EquivalenceConfig ec;
    ec.betas = {alpha_dim() + 0.05, (alpha_dim() + beta_star) / 2, beta_star - 0.05};
    ec.n_max = std::min(cfg.max_level, 5);
    ec.avg_depth_offset = cfg.avg_depth_offset;
    ec.quad_depth = cfg.quad_depth_cap;
    ec.quad_levels = std::min(4, ec.quad_depth);
    std::vector<EquivalenceInputs> funcs;
    funcs.push_back({"good", [](std::int64_t xn, std::int64_t, std::int64_t den) {
                       return f_real(xn, den);
                     }});
    const auto fam = good_function_limit(5, opt);
    const auto& lvl = fam.levels.back();
    const Graph* g5 = &lvl.graph;
    const std::vector<double>* u5 = &lvl.sol.u;
    funcs.push_back({"u5", [g5, u5](std::int64_t xn, std::int64_t yn, std::int64_t den) {
                       // nearest vertex of the containing level-5 cell
                       const std::int64_t S = g5->scale_den;
                       const std::int64_t px = xn * S / den, py = yn * S / den;
                       std::int64_t cx = std::min<std::int64_t>(px / 2, ipow3(5) - 1);
                       std::int64_t cy = std::min<std::int64_t>(py / 2, ipow3(5) - 1);
                       for (std::int64_t ax : {cx, cx - 1})
                         for (std::int64_t ay : {cy, cy - 1}) {
                           if (ax < 0 || ay < 0) continue;
                           if (valid_origin(ax, ay) && px >= 2 * ax && px <= 2 * ax + 2 &&
                               py >= 2 * ay && py <= 2 * ay + 2) {
                             cx = ax;
                             cy = ay;
                             goto found;
                           }
                         }
                     found:
                       std::int32_t best = -1;
                       std::int64_t bd = -1;
                       const GridPoint cand[8] = {
                           {2 * cx, 2 * cy},     {2 * cx + 1, 2 * cy},     {2 * cx + 2, 2 * cy},
                           {2 * cx + 2, 2 * cy + 1}, {2 * cx + 2, 2 * cy + 2},
                           {2 * cx + 1, 2 * cy + 2}, {2 * cx, 2 * cy + 2}, {2 * cx, 2 * cy + 1}};
                       for (const auto& q : cand) {
                         const std::int32_t idx = g5->find_node(q);
                         if (idx < 0) continue;
                         const std::int64_t dx = xn * S - q.x * den, dy = yn * S - q.y * den;
                         const std::int64_t d2 = dx * dx + dy * dy;
                         if (bd < 0 || d2 < bd) {
                           bd = d2;
                           best = idx;
                         }
                       }
                       return (*u5)[static_cast<std::size_t>(best)];
                     }});
    const auto rep = equivalence_report(funcs, ec);
    emit(cfg, "verify_equivalence", to_json(rep));
  } else if (suite == "blowup") {
    const double beta_star = beta_star_of(rho);
    std::vector<double> Dgood, Dx;
    for (int n = 1; n <= 8; ++n) Dgood.push_back(std::pow(6.0 / 7.0, n));
    for (int n = 1; n <= 6; ++n) Dx.push_back(std::pow(8.0 / 9.0, n));
    const auto g1 = besov_blowup(Dgood, beta_star + 0.1);
    const auto g2 = besov_blowup(Dx, 2.3);
    if (!g1.pass || !g2.pass) ++hard_failures;
    Json j;
    j["good"] = {{"beta", g1.beta}, {"growth", g1.growth}, {"pass", g1.pass}};
    j["x"] = {{"beta", g2.beta}, {"growth", g2.growth}, {"pass", g2.pass}};
    emit(cfg, "verify_blowup", j);
  } else if (suite == "approx") {
    const double beta_star = beta_star_of(rho_or_default(cfg, 7.0 / 6.0));
    std::vector<double> D;
    for (int n = 1; n <= 500; ++n) D.push_back(std::pow(6.0 / 7.0, n));
    std::vector<double> betas;
    for (double eps : {0.4, 0.2, 0.1, 0.05, 0.02}) betas.push_back(beta_star - eps);
    const auto rep = approx_local(D, betas, beta_star);
    Json j;
    j["betas"] = rep.betas;
    j["scaled_series"] = rep.scaled;
    j["sup_form"] = rep.sup;
    j["ratio"] = rep.ratio;
    j["bounded"] = rep.bounded;
    emit(cfg, "verify_approx", j);
  } else if (suite == "rayleigh") {
    // randomized short/cut surgeries, exact rational comparisons
    Rng rng(cfg.seed);
    int violations = 0, trials = 0;
    for (const Graph& g : {vertex_graph(1), cell_graph(2)}) {
      const std::int32_t N = g.node_count();
      const std::vector<std::int32_t> A{0}, B{N - 1};
      const Rat base = exact_resistance(g, A, B);
      for (int t = 0; t < 100; ++t) {
        std::int32_t x = 0, y = 0;
        do {
          x = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(N)));
          y = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(N)));
        } while (x == y || x == A[0] || x == B[0] || y == A[0] || y == B[0]);
        std::vector<std::int32_t> map;
        const Graph s = short_nodes(g, {{x, y}}, &map);
        const std::vector<std::int32_t> sa{map[static_cast<std::size_t>(A[0])]};
        const std::vector<std::int32_t> sb{map[static_cast<std::size_t>(B[0])]};
        ++trials;
        if (exact_resistance(s, sa, sb) > base) ++violations;

        const Graph c = cut_edges(g, std::vector<std::size_t>{rng.below(g.edges.size())});
        ++trials;
        try {
          if (exact_resistance(c, A, B) < base) ++violations;
        } catch (const solver_error&) {
          // disconnected: infinite resistance, monotone direction holds
        }
      }
    }
    hard_failures += violations;
    Json j;
    j["trials"] = trials;
    j["violations"] = violations;
    emit(cfg, "verify_rayleigh", j);
  } else {
    std::fprintf(stderr, "unknown suite '%s'\n", suite.c_str());
    return 2;
  }
  return hard_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for graph energies on the Sierpinski carpet"};
  app.require_subcommand(1);
  app.fallthrough();

  Cli cli;
  if (const char* env = std::getenv("CARPETLAB_OUT")) cli.cfg.out_dir = env;

  std::string config_file;
  app.add_option("--config", config_file, "flat key=value config file");
  // global overrides (highest precedence)
  int opt_level = -1;
  double opt_tol = -1, opt_rho = -1;
  int opt_threads = -1;
  std::uint64_t opt_seed = 0;
  bool seed_set = false;
  std::string opt_out, opt_format;
  auto* level_opt = app.add_option("--level,--max-level", opt_level, "max level / level argument");
  app.add_option("--tol", opt_tol, "solver tolerance");
  app.add_option("--threads", opt_threads, "solver threads");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { opt_seed = s; seed_set = true; }, "random seed");
  app.add_option("--rho", opt_rho, "rho override for renormalized energies");
  app.add_option("--out", opt_out, "output directory");
  app.add_option("--format", opt_format, "json|csv (csv adds mirrors)");

  auto* g = app.add_subcommand("graph", "export an approximation graph");
  std::string g_mode = "sc", g_kind = "vertex";
  bool g_nodes = false;
  g->add_option("--mode", g_mode, "sc|cross");
  g->add_option("--kind", g_kind, "vertex|cell");
  g->add_flag("--with-nodes", g_nodes, "include node coordinate lines");

  auto* r = app.add_subcommand("resistance", "per-level resistances and rho estimate");
  auto* id = app.add_subcommand("identities", "exact rational identity suite");
  bool inject_fault = false;
  id->add_flag("--inject-fault", inject_fault, "negative control: corrupt one value");

  auto* v = app.add_subcommand("verify", "verification suites");
  std::string suite;
  v->add_option("--suite", suite, "monotonicity|harnack|equivalence|blowup|approx|rayleigh")
      ->required();

  auto* e = app.add_subcommand("energy", "per-level energies of a test function");
  std::string e_func = "good";
  double e_beta = 2.0;
  e->add_option("--function", e_func, "good|x|harmonic");
  e->add_option("--beta", e_beta, "series exponent");

  auto* gf = app.add_subcommand("good-function", "harmonic family diagnostics");

  auto* gr = app.add_subcommand("green", "Green function scaling on V_infty balls");
  std::int64_t gz_x = 0, gz_y = 0;
  std::vector<int> gr_radii;
  gr->add_option("--x", gz_x, "center x at scale 1/2");
  gr->add_option("--y", gz_y, "center y at scale 1/2");
  gr->add_option("--radii", gr_radii, "graph-distance radii");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_file.empty()) cli.cfg = load_config_file(config_file, cli.cfg);
    if (opt_tol > 0) cli.cfg.tol = opt_tol;
    if (opt_threads > 0) cli.cfg.threads = opt_threads;
    if (seed_set) cli.cfg.seed = opt_seed;
    if (opt_rho > 0) cli.cfg.rho_override = opt_rho;
    if (!opt_out.empty()) cli.cfg.out_dir = opt_out;
    if (!opt_format.empty()) cli.cfg.format = opt_format;
    const int level = level_opt->count() > 0 ? opt_level : cli.cfg.max_level;

    if (g->parsed()) return cmd_graph(cli.cfg, level, g_mode, g_kind, g_nodes);
    if (r->parsed()) return cmd_resistance(cli.cfg, level);
    if (id->parsed()) return cmd_identities(cli.cfg, inject_fault);
    if (v->parsed()) return cmd_verify(cli.cfg, suite);
    if (e->parsed()) return cmd_energy(cli.cfg, e_func, e_beta, level);
    if (gf->parsed()) return cmd_good_function(cli.cfg, std::min(level, 5));
    if (gr->parsed()) return cmd_green(cli.cfg, gz_x, gz_y, gr_radii);
  } catch (const input_error& ex) {
    std::fprintf(stderr, "input error: %s\n", ex.what());
    return 2;
  } catch (const capacity_error& ex) {
    std::fprintf(stderr, "capacity error: %s\n", ex.what());
    return 2;
  } catch (const solver_error& ex) {
    std::fprintf(stderr, "solver error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
