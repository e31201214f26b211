#include "carpetlab/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "carpetlab/errors.hpp"
#include "carpetlab/special.hpp"

namespace carpetlab {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw input_error("least_squares_slope: bad input");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RhoEstimate estimate_rho(const SeriesReport& s, int drop) {
  if (s.values.size() < 3) throw input_error("estimate_rho: need at least 3 levels");
  RhoEstimate est;
  est.dropped = drop;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.values[i] <= 0) throw input_error("estimate_rho: nonpositive value");
    if (s.levels[i] > drop) {
      xs.push_back(static_cast<double>(s.levels[i]));
      ys.push_back(std::log(s.values[i]));
    }
    if (i + 1 < s.values.size()) est.ratios.push_back(s.values[i + 1] / s.values[i]);
  }
  est.rho_hat = std::exp(least_squares_slope(xs, ys));
  est.beta_star_hat = std::log(8.0 * est.rho_hat) / std::log(3.0);
  est.in_hard_bounds = est.rho_hat >= 7.0 / 6.0 - 1e-12 && est.rho_hat <= 1.5 + 1e-12;
  est.in_soft_window = est.rho_hat >= 1.20 && est.rho_hat <= 1.30;
  return est;
}

RhoEstimate estimate_rho_increment(const SeriesReport& s, int drop) {
  if (s.values.size() < 4) throw input_error("estimate_rho_increment: need at least 4 levels");
  RhoEstimate est;
  est.dropped = drop;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
    const double d = s.values[i + 1] - s.values[i];
    if (d <= 0) throw input_error("estimate_rho_increment: nonincreasing series");
    est.ratios.push_back(s.values[i + 1] / s.values[i]);
    if (s.levels[i] > drop) {
      xs.push_back(static_cast<double>(s.levels[i]));
      ys.push_back(std::log(d));
    }
  }
  est.rho_hat = std::exp(least_squares_slope(xs, ys));
  est.beta_star_hat = std::log(8.0 * est.rho_hat) / std::log(3.0);
  est.in_hard_bounds = est.rho_hat >= 7.0 / 6.0 - 1e-12 && est.rho_hat <= 1.5 + 1e-12;
  est.in_soft_window = est.rho_hat >= 1.20 && est.rho_hat <= 1.30;
  return est;
}

MultiplicativityReport multiplicativity_check(const SeriesReport& s) {
  const std::size_t N = s.values.size();
  if (N < 2) throw input_error("multiplicativity_check: need at least 2 levels");
  MultiplicativityReport rep;
  for (std::size_t L = 2; L <= N; ++L) {
    double C = 1;
    for (std::size_t n = 1; n < L; ++n) {
      const std::size_t m = L - n;
      const double prod = s.values[n - 1] * s.values[m - 1];
      const double direct = s.values[L - 1];
      C = std::max({C, prod / direct, direct / prod});
    }
    const double prev = rep.C_by_prefix.empty() ? 1.0 : rep.C_by_prefix.back();
    rep.C_by_prefix.push_back(std::max(prev, C));
  }
  rep.C_hat = rep.C_by_prefix.back();
  const auto [lo, hi] = std::minmax_element(rep.C_by_prefix.begin(), rep.C_by_prefix.end());
  rep.stable = *hi <= 2.0 * *lo;
  return rep;
}

namespace {

struct WarmChain {
  Graph graph;            // previous level's graph
  std::vector<double> u;  // previous level's solution
  bool has = false;
};

double solve_pair(const Graph& g, std::span<const std::int32_t> A,
                  std::span<const std::int32_t> B, const SolveOptions& base, WarmChain& chain) {
  SolveOptions opt = base;
  std::vector<double> init;
  if (chain.has && g.kind == GraphKind::vertex && chain.graph.level + 1 == g.level) {
    init = prolong_vertex_function(chain.graph, chain.u, g);
    opt.warm_start = &init;
  }
  SolveReport rep;
  const double R = effective_resistance(g, A, B, opt, &rep);
  chain.graph = g;
  chain.u = std::move(rep.u);
  chain.has = true;
  return R;
}

}  // namespace

CornerSeries corner_resistances(int n_max, const SolveOptions& opt) {
  CornerSeries out;
  out.RV.quantity = "R_n^V";
  out.R01.quantity = "R_n(p0,p1)";
  out.R15.quantity = "R_n(p1,p5)";
  out.R04.quantity = "R_n(p0,p4)";
  WarmChain cv, c01, c15, c04, c37;
  for (int n = 1; n <= n_max; ++n) {
    const Graph g = vertex_graph(n, Mode::sc, std::max(n, kDefaultLevelCap));
    const std::int64_t S = g.scale_den;
    const auto left = nodes_on_line_x(g, 0);
    const auto right = nodes_on_line_x(g, S);
    auto single = [&](std::int64_t x, std::int64_t y) {
      const std::int32_t i = g.find_node({x, y});
      if (i < 0) throw input_error("corner_resistances: missing corner node");
      return std::vector<std::int32_t>{i};
    };
    const auto p0 = single(0, 0), p1 = single(S / 2, 0), p5 = single(S / 2, S);
    const auto p4 = single(S, S), p3 = single(S, S / 2), p7 = single(0, S / 2);

    out.RV.levels.push_back(n);
    out.RV.values.push_back(solve_pair(g, left, right, opt, cv));
    out.R01.levels.push_back(n);
    out.R01.values.push_back(solve_pair(g, p0, p1, opt, c01));
    out.R15.levels.push_back(n);
    out.R15.values.push_back(solve_pair(g, p1, p5, opt, c15));
    out.R04.levels.push_back(n);
    out.R04.values.push_back(solve_pair(g, p0, p4, opt, c04));
    const double r37 = solve_pair(g, p3, p7, opt, c37);
    out.symmetry_gap.push_back(std::abs(out.R15.values.back() - r37) / out.R15.values.back());
  }
  return out;
}

namespace {

std::vector<std::int32_t> repeated_word_node(int digit, int n) {
  std::uint64_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * 8 + static_cast<std::uint64_t>(digit);
  return {static_cast<std::int32_t>(idx)};
}

double solve_cells(const Graph& g, int da, int db, const SolveOptions& base, WarmChain& chain) {
  SolveOptions opt = base;
  std::vector<double> init;
  if (chain.has && chain.graph.level + 1 == g.level) {
    // a cell inherits its parent's potential
    init.resize(static_cast<std::size_t>(g.node_count()));
    for (std::size_t i = 0; i < init.size(); ++i) init[i] = chain.u[i >> 3];
    opt.warm_start = &init;
  }
  SolveReport rep;
  const double R = effective_resistance(g, repeated_word_node(da, g.level),
                                        repeated_word_node(db, g.level), opt, &rep);
  chain.graph = g;
  chain.u = std::move(rep.u);
  chain.has = true;
  return R;
}

}  // namespace

CellSeries cell_resistances(int n_max, const SolveOptions& opt) {
  CellSeries out;
  out.N01.quantity = "frakR_n(0^n,1^n)";
  out.N04.quantity = "frakR_n(0^n,4^n)";
  out.N15.quantity = "frakR_n(1^n,5^n)";
  WarmChain c01, c04, c15, c37;
  for (int n = 1; n <= n_max; ++n) {
    const Graph g = cell_graph(n, Mode::sc, std::max(n, kDefaultLevelCap + 1));
    out.N01.levels.push_back(n);
    out.N01.values.push_back(solve_cells(g, 0, 1, opt, c01));
    out.N04.levels.push_back(n);
    out.N04.values.push_back(solve_cells(g, 0, 4, opt, c04));
    out.N15.levels.push_back(n);
    out.N15.values.push_back(solve_cells(g, 1, 5, opt, c15));
    const double n37 = solve_cells(g, 3, 7, opt, c37);
    out.symmetry_gap.push_back(std::abs(out.N15.values.back() - n37) / out.N15.values.back());
  }
  return out;
}

ChainBound chain_bound(const Word& w, const SolveOptions& opt) {
  validate_word(w);
  if (w.mode != Mode::sc) throw input_error("chain_bound: SC words only");
  const int n = w.level();
  if (n < 1) throw input_error("chain_bound: empty word");
  const Graph g = cell_graph(n);

  // w^(i) = w_1..w_{n-i} (w_{n-i+1})^i, then 0^n
  std::vector<Word> seq;
  for (int i = 1; i <= n; ++i) {
    Word v{Mode::sc, {}};
    v.digits.assign(w.digits.begin(), w.digits.begin() + (n - i));
    v.digits.insert(v.digits.end(), static_cast<std::size_t>(i), w.digits[static_cast<std::size_t>(n - i)]);
    seq.push_back(v);
  }
  seq.push_back(word_repeat(0, n));

  ChainBound out;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto a = static_cast<std::int32_t>(word_index(seq[i]));
    const auto b = static_cast<std::int32_t>(word_index(seq[i + 1]));
    if (a == b) {
      out.legs.push_back(0.0);
      continue;
    }
    const std::vector<std::int32_t> A{a}, B{b};
    out.legs.push_back(effective_resistance(g, A, B, opt));
    out.bound += out.legs.back();
  }
  const auto a = static_cast<std::int32_t>(word_index(w));
  const auto b = static_cast<std::int32_t>(word_index(seq.back()));
  out.direct = a == b ? 0.0 : effective_resistance(g, std::vector<std::int32_t>{a},
                                                   std::vector<std::int32_t>{b}, opt);
  return out;
}

VinftyScaling vinfty_scaling(const GridPoint& z, const std::vector<int>& radii,
                             const SolveOptions& opt) {
  VinftyScaling out;
  for (int r : radii) {
    const Graph ball = vinfty_ball(z, r);
    const std::int32_t zi = ball.find_node(z);
    std::vector<std::int32_t> boundary;
    for (std::int32_t i = 0; i < ball.node_count(); ++i)
      if (ball.boundary[static_cast<std::size_t>(i)]) boundary.push_back(i);
    if (boundary.empty()) throw input_error("vinfty_scaling: radius too small");

    out.radii.push_back(r);
    const std::vector<std::int32_t> A{zi};
    out.R.push_back(effective_resistance(ball, A, boundary, opt));
    out.gzz.push_back(green_function(ball, zi, opt).u[static_cast<std::size_t>(zi)]);

    // graph distance vs Euclidean distance inside the ball
    std::vector<int> dist(static_cast<std::size_t>(ball.node_count()), -1);
    std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(ball.node_count()));
    for (const auto& e : ball.edges) {
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::queue<std::int32_t> q;
    dist[static_cast<std::size_t>(zi)] = 0;
    q.push(zi);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
    for (std::int32_t i = 0; i < ball.node_count(); ++i) {
      if (i == zi || dist[static_cast<std::size_t>(i)] < 0) continue;
      const auto p = ball.points[static_cast<std::size_t>(i)];
      const double eu = std::hypot(static_cast<double>(p.x - z.x), static_cast<double>(p.y - z.y));
      out.distortion_max = std::max(out.distortion_max, dist[static_cast<std::size_t>(i)] / eu);
    }
  }
  if (out.radii.size() >= 2) {
    std::vector<double> lr, lR, lg;
    for (std::size_t i = 0; i < out.radii.size(); ++i) {
      lr.push_back(std::log(static_cast<double>(out.radii[i])));
      lR.push_back(std::log(out.R[i]));
      lg.push_back(std::log(out.gzz[i]));
    }
    out.gamma_R = least_squares_slope(lr, lR);
    out.gamma_g = least_squares_slope(lr, lg);
  }
  return out;
}

}  // namespace carpetlab
