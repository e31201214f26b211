#include "carpetlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "carpetlab/errors.hpp"
#include "carpetlab/rational.hpp"
#include "carpetlab/resistance.hpp"

namespace carpetlab {

void finalize_ratios(RatioReport& rep) {
  if (rep.ratios.empty()) {
    rep.max_ratio = rep.min_ratio = 0;
    return;
  }
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
  for (double r : rep.ratios) {
    if (!std::isfinite(r)) rep.pass = false;
  }
}

RatioReport monotonicity_a(const GoodFunctionFamily& fam, double rho_hat) {
  RatioReport rep;
  rep.claim = "a_n <= C a_{n+m}";
  const int N = static_cast<int>(fam.levels.size());
  if (N < 2) throw input_error("monotonicity_a: need at least two levels");
  const Graph& fine = fam.levels.back().graph;
  const auto& u_fine = fam.levels.back().sol.u;

  std::vector<double> a(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    const Graph& gn = fam.levels[static_cast<std::size_t>(n - 1)].graph;
    const auto un = restrict_vertex_function(fine, u_fine, gn);
    a[static_cast<std::size_t>(n)] =
        std::pow(rho_hat, n) * energy_D<double>(gn, un);
  }

  // running max of the ratios, grouped by the finer level n+m
  double running = 0, first_running = 0;
  for (int top = 2; top <= N; ++top) {
    for (int n = 1; n < top; ++n) {
      const double r = a[static_cast<std::size_t>(n)] / a[static_cast<std::size_t>(top)];
      rep.labels.push_back("a_" + std::to_string(n) + "/a_" + std::to_string(top));
      rep.ratios.push_back(r);
      running = std::max(running, r);
    }
    if (top == 2) first_running = running;
  }
  rep.drift = first_running > 0 ? running / first_running : 1.0;
  finalize_ratios(rep);
  if (rep.drift > 1.2) rep.pass = false;
  return rep;
}

RatioReport monotonicity_B(int level_total_max, int draws, std::uint64_t seed, double rho_hat) {
  RatioReport rep;
  rep.claim = "B_n(M_{n,m}c) <= C B_{n+m}(c)";
  if (level_total_max < 2) throw input_error("monotonicity_B: need n+m >= 2");

  std::map<int, Graph> cell_graphs;
  for (int L = 1; L <= level_total_max; ++L) cell_graphs.emplace(L, cell_graph(L));

  const Rat rho = [&] {
    // rho as an exact fraction keeps the whole ratio exact
    Rat r(rho_hat);
    r.canonicalize();
    return r;
  }();

  double running = 0, first_running = -1;
  for (int total = 2; total <= level_total_max; ++total) {
    const auto& gfine = cell_graphs.at(total);
    const std::uint64_t cells = word_count(total, Mode::sc);
    for (int n = 1; n < total; ++n) {
      const int m = total - n;
      const auto& gcoarse = cell_graphs.at(n);
      auto one_case = [&](const std::vector<Rat>& c, const std::string& label) {
        const Rat denom = energy_a<Rat>(gfine, c, rho);
        if (denom == 0) return;  // constants are excluded (0/0)
        const auto mc = mean_operator<Rat>(c, m);
        const Rat numer = energy_a<Rat>(gcoarse, mc, rho);
        rep.labels.push_back(label);
        rep.ratios.push_back(Rat(numer / denom).get_d());
        running = std::max(running, rep.ratios.back());
      };

      // indicator of the first cell, plus seeded random rational data
      std::vector<Rat> ind(cells, Rat(0));
      ind[0] = 1;
      one_case(ind, "indicator n=" + std::to_string(n) + " m=" + std::to_string(m));
      for (int d = 0; d < draws; ++d) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m),
                         static_cast<std::uint64_t>(d)));
        std::vector<Rat> c(cells);
        for (auto& v : c) v = rat(static_cast<long>(rng.below(129)) - 64, 64);
        one_case(c, "random n=" + std::to_string(n) + " m=" + std::to_string(m) + " d=" +
                        std::to_string(d));
      }
    }
    if (first_running < 0) first_running = running;
  }
  rep.drift = first_running > 0 ? running / first_running : 1.0;
  finalize_ratios(rep);
  if (rep.drift > 1.2) rep.pass = false;
  return rep;
}

RatioReport equivalence_report(const std::vector<EquivalenceInputs>& funcs,
                               const EquivalenceConfig& cfg) {
  RatioReport rep;
  rep.claim = "E_beta ~ frakE_beta ~ quadrature";

  struct PerFunc {
    std::vector<double> D;      // D_n, n = 1..n_max
    std::vector<double> frakD;  // frakD_n(P_n u)
    QuadratureReport quad;
  };
  std::vector<PerFunc> data;
  for (const auto& f : funcs) {
    PerFunc pf;
    for (int n = 1; n <= cfg.n_max; ++n) {
      const Graph g = vertex_graph(n);
      std::vector<double> vals(static_cast<std::size_t>(g.node_count()));
      for (std::int32_t i = 0; i < g.node_count(); ++i) {
        const auto p = g.points[static_cast<std::size_t>(i)];
        vals[static_cast<std::size_t>(i)] = f.u(p.x, p.y, g.scale_den);
      }
      pf.D.push_back(energy_D<double>(g, vals));

      const Graph cg = cell_graph(n);
      const auto avg = cell_average<double>(f.u, n, n + cfg.avg_depth_offset);
      pf.frakD.push_back(energy_D<double>(cg, avg));
    }
    pf.quad = besov_quadrature(f.u, 0.0, cfg.quad_levels, cfg.quad_depth, cfg.quad_depth);
    data.push_back(std::move(pf));
  }

  // per (function, beta): three partial sums and their pairwise ratios
  std::map<std::string, std::vector<double>> by_pair;  // cross-beta stability
  for (std::size_t fi = 0; fi < funcs.size(); ++fi) {
    for (double beta : cfg.betas) {
      const auto E = series_E(data[fi].D, beta).partial.back();
      const auto F = series_E(data[fi].frakD, beta).partial.back();
      double Q = 0;
      const double t = (alpha_dim() + beta) * std::log(3.0);
      for (int k = 0; k <= data[fi].quad.levels; ++k)
        Q += std::exp(t * k) * data[fi].quad.raw[static_cast<std::size_t>(k)];
      const double trio[3] = {E, F, Q};
      const char* names[3] = {"E", "frakE", "quad"};
      for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
          if (trio[b] == 0) continue;
          const double r = trio[a] / trio[b];
          char buf[160];
          std::snprintf(buf, sizeof buf, "%s %s/%s beta=%.4f", funcs[fi].name.c_str(), names[a],
                        names[b], beta);
          rep.labels.emplace_back(buf);
          rep.ratios.push_back(r);
          by_pair[funcs[fi].name + names[a] + names[b]].push_back(r);
          if (r < cfg.window_lo || r > cfg.window_hi) rep.pass = false;
        }
      }
    }
  }
  // each pair's ratio may move by at most a factor 3 across beta
  double worst = 1;
  for (const auto& [k, v] : by_pair) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo > 0) worst = std::max(worst, *hi / *lo);
  }
  rep.drift = worst;
  if (worst > 3.0) rep.pass = false;
  finalize_ratios(rep);
  return rep;
}

namespace {

struct SubgraphBall {
  Graph sub;
  std::vector<std::int32_t> boundary;  // indices in sub
  std::vector<std::int32_t> inner;     // interior nodes within delta*r
};

// Induced subgraph on the Euclidean ball; boundary nodes are those with a
// neighbor outside, the inner list collects interior nodes within delta*r.
SubgraphBall euclidean_ball_subgraph(const Graph& g, const GridPoint& center, double radius,
                                     double delta) {
  const double rr = radius * static_cast<double>(g.scale_den);
  const double rr2 = rr * rr;
  const double ri2 = rr2 * delta * delta;
  const std::int32_t n = g.node_count();
  std::vector<std::int32_t> sel(static_cast<std::size_t>(n), -1);
  SubgraphBall out;
  out.sub.kind = g.kind;
  out.sub.mode = g.mode;
  out.sub.level = g.level;
  out.sub.scale_den = g.scale_den;
  auto inside = [&](const GridPoint& p) {
    const double dx = static_cast<double>(p.x - center.x), dy = static_cast<double>(p.y - center.y);
    return dx * dx + dy * dy < rr2;
  };
  for (std::int32_t i = 0; i < n; ++i) {
    if (inside(g.points[static_cast<std::size_t>(i)])) {
      sel[static_cast<std::size_t>(i)] = out.sub.node_count();
      out.sub.points.push_back(g.points[static_cast<std::size_t>(i)]);
    }
  }
  std::vector<char> has_outside_nbr(out.sub.points.size(), 0);
  for (const auto& e : g.edges) {
    const std::int32_t su = sel[static_cast<std::size_t>(e.u)], sv = sel[static_cast<std::size_t>(e.v)];
    if (su >= 0 && sv >= 0) {
      out.sub.edges.push_back({su, sv, e.w});
    } else if (su >= 0) {
      has_outside_nbr[static_cast<std::size_t>(su)] = 1;
    } else if (sv >= 0) {
      has_outside_nbr[static_cast<std::size_t>(sv)] = 1;
    }
  }
  for (std::int32_t i = 0; i < out.sub.node_count(); ++i) {
    const auto p = out.sub.points[static_cast<std::size_t>(i)];
    const double dx = static_cast<double>(p.x - center.x), dy = static_cast<double>(p.y - center.y);
    if (has_outside_nbr[static_cast<std::size_t>(i)]) {
      out.boundary.push_back(i);
    } else if (dx * dx + dy * dy <= ri2) {
      out.inner.push_back(i);
    }
  }
  return out;
}

}  // namespace

HarnackReport harnack_ratios(const HarnackConfig& cfg, const SolveOptions& opt) {
  HarnackReport out;
  out.detail.claim = "max <= C min on the shrunken ball";
  for (int n : cfg.levels) {
    const Graph g = vertex_graph(n);
    const std::int64_t S = g.scale_den;
    // centers: an interior corner, a boundary midpoint, a hole corner
    const std::vector<GridPoint> centers = {
        {2 * S / 6, 2 * S / 6}, {S / 2, 0}, {2 * S / 3, 2 * S / 3}};
    double worst = 0;
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
      const auto ball = euclidean_ball_subgraph(g, centers[ci], cfg.radius, cfg.delta);
      if (ball.boundary.empty() || ball.inner.size() < 2) continue;
      for (int d = 0; d < cfg.draws; ++d) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(n), ci, static_cast<std::uint64_t>(d)));
        BoundarySpec bc;
        bc.nodes = ball.boundary;
        for (std::size_t k = 0; k < ball.boundary.size(); ++k) bc.values.push_back(rng.unit());
        const auto sol = solve_dirichlet(ball.sub, bc, opt);
        double mx = 0, mn = std::numeric_limits<double>::max();
        for (auto i : ball.inner) {
          mx = std::max(mx, sol.u[static_cast<std::size_t>(i)]);
          mn = std::min(mn, sol.u[static_cast<std::size_t>(i)]);
        }
        if (mn <= 0) continue;
        const double ratio = mx / mn;
        worst = std::max(worst, ratio);
        out.detail.labels.push_back("n=" + std::to_string(n) + " c=" + std::to_string(ci) +
                                    " draw=" + std::to_string(d));
        out.detail.ratios.push_back(ratio);
      }
    }
    if (cfg.include_un_configuration) {
      // u_n - 1/2 is nonnegative harmonic on the right half; reuse it
      const auto lvl = harmonic_un(n, opt);
      const GridPoint c{3 * S / 4, S / 2};  // near (3/4, 1/2)
      const auto ball = euclidean_ball_subgraph(lvl.graph, c, 0.2, cfg.delta);
      double mx = 0, mn = std::numeric_limits<double>::max();
      for (auto i : ball.inner) {
        const double v = lvl.sol.u[static_cast<std::size_t>(
                             lvl.graph.find_node(ball.sub.points[static_cast<std::size_t>(i)]))] -
                         0.5;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
      }
      if (!ball.inner.empty() && mn > 0) {
        worst = std::max(worst, mx / mn);
        out.detail.labels.push_back("n=" + std::to_string(n) + " u_n right-half");
        out.detail.ratios.push_back(mx / mn);
      }
    }
    out.levels.push_back(n);
    out.C_H.push_back(worst);
  }
  const auto [lo, hi] = std::minmax_element(out.C_H.begin(), out.C_H.end());
  out.stability = (*lo > 0) ? *hi / *lo : std::numeric_limits<double>::infinity();
  out.stable = out.stability < 2.0;
  finalize_ratios(out.detail);
  return out;
}

HolderReport holder_exponent(const Graph& g, std::span<const double> u, double beta_star_hat,
                             int sample_pairs, std::uint64_t seed) {
  HolderReport out;
  out.reference = (beta_star_hat - alpha_dim()) / 2.0;
  const std::int64_t S = g.scale_den;
  std::vector<std::int32_t> region;
  for (std::int32_t i = 0; i < g.node_count(); ++i) {
    const auto p = g.points[static_cast<std::size_t>(i)];
    if (4 * p.x >= S && 4 * p.x <= 3 * S && 4 * p.y >= S && 4 * p.y <= 3 * S)
      region.push_back(i);
  }
  if (region.size() < 2) throw input_error("holder_exponent: empty sampling region");
  Rng rng(seed);
  std::vector<double> lx, ly;
  for (int k = 0; k < sample_pairs; ++k) {
    const auto a = region[rng.below(region.size())];
    const auto b = region[rng.below(region.size())];
    if (a == b) continue;
    const auto pa = g.points[static_cast<std::size_t>(a)], pb = g.points[static_cast<std::size_t>(b)];
    const double du = std::abs(u[static_cast<std::size_t>(a)] - u[static_cast<std::size_t>(b)]);
    if (du < 1e-12) continue;
    const double dx = std::hypot(static_cast<double>(pa.x - pb.x), static_cast<double>(pa.y - pb.y)) /
                      static_cast<double>(S);
    lx.push_back(std::log(dx));
    ly.push_back(std::log(du));
  }
  if (lx.size() < 8) throw input_error("holder_exponent: not enough usable pairs");
  out.theta_hat = least_squares_slope(lx, ly);
  out.pairs_used = static_cast<int>(lx.size());
  return out;
}

BlowupReport besov_blowup(std::span<const double> D, double beta) {
  BlowupReport out;
  out.beta = beta;
  const double t = beta * std::log(3.0) - std::log(8.0);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < D.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    out.terms.push_back(std::exp(t * n) * D[i]);
    if (out.terms.back() > 0) {
      xs.push_back(n);
      ys.push_back(std::log(out.terms.back()));
    }
  }
  if (xs.size() < 2) return out;  // constant input: vacuous
  out.growth = std::exp(least_squares_slope(xs, ys));
  out.pass = out.growth > 1.0;
  return out;
}

ApproxLocalReport approx_local(std::span<const double> D, std::span<const double> betas,
                               double beta_star, double window_lo, double window_hi) {
  ApproxLocalReport out;
  out.sup = sup_form(D, beta_star);
  out.bounded = out.sup > 0;
  for (double b : betas) {
    out.betas.push_back(b);
    const auto sums = series_E(D, b);
    out.scaled.push_back((beta_star - b) * sums.partial.back());
    const double r = out.sup > 0 ? out.scaled.back() / out.sup : 0.0;
    out.ratio.push_back(r);
    if (r < window_lo || r > window_hi) out.bounded = false;
  }
  return out;
}

}  // namespace carpetlab
