#include "carpetlab/special.hpp"

#include <algorithm>
#include <cmath>

#include "carpetlab/errors.hpp"

namespace carpetlab {

namespace {

// per-digit increment start and width factors: (0,2/7), (2/7,3/7), (5/7,2/7)
const Rat kStart[3] = {rat(0), rat(2, 7), rat(5, 7)};
const Rat kWidth[3] = {rat(2, 7), rat(3, 7), rat(2, 7)};

}  // namespace

Rat f_triadic(std::int64_t i, int n) {
  if (n < 0) throw input_error("f_triadic: negative level");
  const std::int64_t den = ipow3(n);
  if (i < 0 || i > den) throw input_error("f_triadic: abscissa out of range");
  if (i == den) return rat(1);
  Rat a(0), d(1);
  for (int k = n - 1; k >= 0; --k) {
    const int digit = static_cast<int>((i / ipow3(k)) % 3);
    a += kStart[digit] * d;
    d *= kWidth[digit];
  }
  return a;
}

Rat good_value_x(std::int64_t X, int n) {
  const std::int64_t den = 2 * ipow3(n);
  if (X < 0 || X > den) throw input_error("good_value_x: abscissa out of range");
  if (X % 2 == 0) return f_triadic(X / 2, n);
  return (f_triadic((X - 1) / 2, n) + f_triadic((X + 1) / 2, n)) / 2;
}

double f_real(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0 || num > den) throw input_error("f_real: argument out of [0,1]");
  if (num == den) return 1.0;
  double a = 0, d = 1;
  static const double start[3] = {0.0, 2.0 / 7.0, 5.0 / 7.0};
  static const double width[3] = {2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0};
  for (int k = 0; k < 48 && num != 0; ++k) {
    num *= 3;
    const int digit = static_cast<int>(num / den);
    num -= static_cast<std::int64_t>(digit) * den;
    a += start[digit] * d;
    d *= width[digit];
  }
  return a;
}

Rat good_energy(int n, int cap) {
  if (n < 1) throw input_error("good_energy: level must be >= 1");
  if (n > cap) throw capacity_error("good_energy: level exceeds rational capacity");
  const std::int64_t side = ipow3(n);
  Rat total(0);
  for (std::int64_t c = 0; c < side; ++c) {
    // cells per column: a base-3 digit 1 in the column index forces the
    // row digit away from 1, leaving 2 choices instead of 3
    std::int64_t count = 1;
    int ones = 0;
    for (std::int64_t t = c, k = 0; k < n; t /= 3, ++k)
      if (t % 3 == 1) ++ones;
    for (int k = 0; k < n; ++k) count *= (k < ones ? 2 : 3);

    const Rat fl = f_triadic(c, n);
    const Rat fr = f_triadic(c + 1, n);
    const Rat fm = good_value_x(2 * c + 1, n);
    const Rat dl = fm - fl, dr = fr - fm;
    // two pairs per horizontal half-edge (bottom and top side of the cell)
    total += rat(2 * count) * (dl * dl + dr * dr);
  }
  return total;
}

Rat phi_eval(const Rat& x, const Rat& y) {
  const Rat u = x - y, v = rat(1) - y;
  return rat(3) * x * x + rat(2) * u * u + rat(3) * v * v;
}

PhiMin phi_minimize() {
  // stationarity: 10x - 4y = 0, -4x + 10y = 6; eliminate x
  const Rat a11 = rat(10), a12 = rat(-4), b1 = rat(0);
  const Rat a21 = rat(-4), a22 = rat(10), b2 = rat(6);
  const Rat m = a21 / a11;
  const Rat y = (b2 - m * b1) / (a22 - m * a12);
  const Rat x = (b1 - a12 * y) / a11;
  return {x, y, phi_eval(x, y)};
}

Rat cantor_energy(int n, int cap) {
  if (n < 1) throw input_error("cantor_energy: level must be >= 1");
  if (n > cap) throw capacity_error("cantor_energy: level exceeds rational capacity");
  const std::uint64_t cells = word_count(n, Mode::cross);
  // u(x,y) = x at scale 2*3^n: vertex value is its integer abscissa, so the
  // pair differences are integers and one division at the end suffices
  std::int64_t sum = 0;
  for (std::uint64_t c = 0; c < cells; ++c) {
    const auto vs = cell_vertices(word_from_index(c, n, Mode::cross));
    // bottom run p0-p1-p2, top run p4-p5-p6 (indices 3,4,5 in the list)
    const std::int64_t d1 = vs[1].x - vs[0].x, d2 = vs[2].x - vs[1].x;
    const std::int64_t d3 = vs[4].x - vs[3].x, d4 = vs[5].x - vs[4].x;
    sum += d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4;
  }
  const Rat den = rat(2) * rat(static_cast<long>(ipow3(n)));
  return rat(static_cast<long>(sum)) / (den * den);
}

std::vector<std::int32_t> nodes_on_line_x(const Graph& g, std::int64_t X) {
  std::vector<std::int32_t> out;
  for (std::int32_t i = 0; i < g.node_count(); ++i)
    if (g.points[static_cast<std::size_t>(i)].x == X) out.push_back(i);
  return out;
}

std::vector<std::int32_t> nodes_on_line_y(const Graph& g, std::int64_t Y) {
  std::vector<std::int32_t> out;
  for (std::int32_t i = 0; i < g.node_count(); ++i)
    if (g.points[static_cast<std::size_t>(i)].y == Y) out.push_back(i);
  return out;
}

HarmonicLevel harmonic_un(int n, const SolveOptions& opt, const HarmonicLevel* prev) {
  HarmonicLevel out;
  out.graph = vertex_graph(n);
  const std::int64_t S = out.graph.scale_den;

  BoundarySpec bc;
  for (auto i : nodes_on_line_x(out.graph, 0)) {
    bc.nodes.push_back(i);
    bc.values.push_back(0.0);
  }
  for (auto i : nodes_on_line_x(out.graph, S)) {
    bc.nodes.push_back(i);
    bc.values.push_back(1.0);
  }

  SolveOptions o = opt;
  std::vector<double> init;
  if (prev && prev->graph.level == n - 1) {
    init = prolong_vertex_function(prev->graph, prev->sol.u, out.graph);
    o.warm_start = &init;
  }
  out.sol = solve_dirichlet(out.graph, bc, o);

  double sym = 0;
  for (std::int32_t i = 0; i < out.graph.node_count(); ++i) {
    const GridPoint p = out.graph.points[static_cast<std::size_t>(i)];
    const double u = out.sol.u[static_cast<std::size_t>(i)];
    const std::int32_t jx = out.graph.find_node({S - p.x, p.y});
    const std::int32_t jy = out.graph.find_node({p.x, S - p.y});
    sym = std::max(sym, std::abs(u - (1.0 - out.sol.u[static_cast<std::size_t>(jx)])));
    sym = std::max(sym, std::abs(u - out.sol.u[static_cast<std::size_t>(jy)]));
  }
  out.symmetry_residual = sym;

  double mid = 0;
  for (auto i : nodes_on_line_x(out.graph, S / 2))
    mid = std::max(mid, std::abs(out.sol.u[static_cast<std::size_t>(i)] - 0.5));
  out.midline_residual = mid;
  return out;
}

GoodFunctionFamily good_function_limit(int n_max, const SolveOptions& opt) {
  if (n_max < 1) throw input_error("good_function_limit: level must be >= 1");
  GoodFunctionFamily fam;
  for (int n = 1; n <= n_max; ++n) {
    const HarmonicLevel* prev = fam.levels.empty() ? nullptr : &fam.levels.back();
    fam.levels.push_back(harmonic_un(n, opt, prev));
  }
  for (int n = 1; n < n_max; ++n) {
    const auto& coarse = fam.levels[static_cast<std::size_t>(n - 1)];
    const auto& fine = fam.levels[static_cast<std::size_t>(n)];
    const std::int64_t S = coarse.graph.scale_den;
    double sup = 0;
    for (std::int32_t i = 0; i < coarse.graph.node_count(); ++i) {
      const GridPoint p = coarse.graph.points[static_cast<std::size_t>(i)];
      if (4 * p.x < S || 4 * p.x > 3 * S) continue;  // keep x in [1/4, 3/4]
      const std::int32_t j = fine.graph.find_node({3 * p.x, 3 * p.y});
      sup = std::max(sup, std::abs(coarse.sol.u[static_cast<std::size_t>(i)] -
                                   fine.sol.u[static_cast<std::size_t>(j)]));
    }
    fam.sup_diff_interior.push_back(sup);
  }
  return fam;
}

}  // namespace carpetlab
