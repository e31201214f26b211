#include <doctest.h>

#include <cmath>

#include "carpetlab/energy.hpp"
#include "carpetlab/verify.hpp"

using namespace carpetlab;

namespace {

std::vector<Rat> eval_x(const Graph& g) {
  std::vector<Rat> u(static_cast<std::size_t>(g.node_count()));
  for (std::int32_t i = 0; i < g.node_count(); ++i)
    u[static_cast<std::size_t>(i)] = rat(g.points[static_cast<std::size_t>(i)].x, g.scale_den);
  return u;
}

const Field<Rat> kFieldX = [](std::int64_t xn, std::int64_t, std::int64_t den) {
  return rat(xn, den);
};

}  // namespace

TEST_CASE("energy_D on constants and coordinates") {
  for (int n = 1; n <= 4; ++n) {
    const Graph g = vertex_graph(n);
    std::vector<Rat> c(static_cast<std::size_t>(g.node_count()), rat(3, 7));
    CHECK(energy_D<Rat>(g, c) == 0);
    // per-cell hand computation: 4 horizontal pairs of squared increment
    // (3^-n/2)^2 give 9^-n per cell, 8^n cells
    CHECK(energy_D<Rat>(g, eval_x(g)) == rat_pow(rat(8, 9), n));
  }
  const Graph g1 = vertex_graph(1);
  std::vector<Rat> bad(3, rat(1));
  CHECK_THROWS_AS(energy_D<Rat>(g1, bad), input_error);
}

TEST_CASE("energy_a rescales by rho^n") {
  for (int n = 1; n <= 3; ++n) {
    const Graph g = vertex_graph(n);
    const auto u = eval_x(g);
    CHECK(energy_a<Rat>(g, u, rat(1)) == energy_D<Rat>(g, u));
    CHECK(energy_a<Rat>(g, u, rat(3, 2)) == rat_pow(rat(4, 3), n));
    std::vector<Rat> c(static_cast<std::size_t>(g.node_count()), rat(5));
    CHECK(energy_a<Rat>(g, c, rat(3, 2)) == 0);
  }
}

TEST_CASE("energy is quadratic and symmetry-invariant") {
  const Graph g = vertex_graph(2);
  Rng rng(42);
  std::vector<Rat> u(static_cast<std::size_t>(g.node_count()));
  for (auto& v : u) v = rat(static_cast<long>(rng.below(201)) - 100, 32);
  const Rat e = energy_D<Rat>(g, u);
  std::vector<Rat> u3 = u;
  for (auto& v : u3) v *= rat(3);
  CHECK(energy_D<Rat>(g, u3) == rat(9) * e);

  for (int sym = 0; sym < 8; ++sym) {
    std::vector<Rat> perm(u.size());
    for (std::int32_t i = 0; i < g.node_count(); ++i) {
      const auto q = dihedral_apply(sym, g.points[static_cast<std::size_t>(i)], g.scale_den);
      perm[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(g.find_node(q))];
    }
    CHECK(energy_D<Rat>(g, perm) == e);
  }
}

TEST_CASE("self-similar decomposition of D_{n+1}") {
  // D_{n+1}(u) = sum_i D_n(u o f_i), exact on random rationals
  Rng rng(7);
  for (int n = 1; n <= 3; ++n) {
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
    CHECK(total == energy_D<Rat>(fine, u));
  }
}

TEST_CASE("frakD on the level-1 ring") {
  const Graph g = cell_graph(1);
  std::vector<Rat> c(8, rat(5, 3));
  CHECK(energy_D<Rat>(g, c) == 0);

  std::vector<Rat> ind(8, rat(0));
  ind[0] = 1;
  CHECK(energy_D<Rat>(g, ind) == 2);  // two ring edges cross the boundary

  // ring position index: seven unit steps plus the wrap-around difference 7
  std::vector<Rat> pos(8);
  for (int i = 0; i < 8; ++i) pos[static_cast<std::size_t>(i)] = rat(i);
  Rat brute(0);
  for (int i = 0; i < 8; ++i) {
    const Rat d = pos[static_cast<std::size_t>((i + 1) % 8)] - pos[static_cast<std::size_t>(i)];
    brute += d * d;
  }
  CHECK(brute == 56);
  CHECK(energy_D<Rat>(g, pos) == brute);
}

TEST_CASE("mean operator") {
  // constant is preserved
  std::vector<Rat> c(64, rat(9, 7));
  const auto m1 = mean_operator<Rat>(c, 1);
  REQUIRE(m1.size() == 8);
  for (const auto& v : m1) CHECK(v == rat(9, 7));

  // indicator of child digit 0: every parent averages to 1/8
  std::vector<Rat> ind(64, rat(0));
  for (std::size_t i = 0; i < 64; i += 8) ind[i] = 1;
  for (const auto& v : mean_operator<Rat>(ind, 1)) CHECK(v == rat(1, 8));

  // linearity on random data
  Rng rng(11);
  std::vector<Rat> a(512), b(512);
  for (std::size_t i = 0; i < 512; ++i) {
    a[i] = rat(static_cast<long>(rng.below(65)) - 32, 8);
    b[i] = rat(static_cast<long>(rng.below(65)) - 32, 8);
  }
  const Rat lam = rat(5, 2);
  std::vector<Rat> combo(512);
  for (std::size_t i = 0; i < 512; ++i) combo[i] = lam * a[i] + b[i];
  const auto ma = mean_operator<Rat>(a, 2), mb = mean_operator<Rat>(b, 2);
  const auto mc = mean_operator<Rat>(combo, 2);
  for (std::size_t i = 0; i < mc.size(); ++i) CHECK(mc[i] == lam * ma[i] + mb[i]);

  CHECK_THROWS_AS(mean_operator<Rat>(std::span<const Rat>(a.data(), 7), 1), input_error);
}

TEST_CASE("cell averages") {
  // u == 1 stays 1 at any depth
  const Field<Rat> one = [](std::int64_t, std::int64_t, std::int64_t) { return rat(1); };
  for (const auto& v : cell_average<Rat>(one, 1, 3)) CHECK(v == 1);

  // u = x on cell [0]: mean of the 8^m lower-left abscissas follows the
  // independent recursion S_m = (1 + S_{m-1})/3, value S_m / 3
  for (int m : {1, 2, 4, 5}) {
    const auto avg = cell_average<Rat>(kFieldX, 1, m);
    Rat S(0);
    for (int k = 0; k < m; ++k) S = (1 + S) / 3;
    CHECK(avg[0] == S / 3);
  }
  // converges to the exact self-similar integral 1/6
  const auto deep = cell_average<Rat>(kFieldX, 1, 5);
  CHECK(abs(deep[0] - rat(1, 6)) < rat(1, 1000));

  // averaging at level n equals mean_operator of the level-(n+1) averages
  const auto fine = cell_average<Rat>(kFieldX, 2, 2);
  const auto coarse = cell_average<Rat>(kFieldX, 1, 3);
  const auto folded = mean_operator<Rat>(fine, 1);
  REQUIRE(folded.size() == coarse.size());
  for (std::size_t i = 0; i < folded.size(); ++i) CHECK(folded[i] == coarse[i]);
}

TEST_CASE("energy_b for u = x at level 1") {
  // exact cell means of x differ by 1/3 exactly on the four column-crossing
  // ring edges and vanish on the rest: frakD = 4/9 at any depth
  const Graph cg = cell_graph(1);
  for (int m : {0, 1, 3}) {
    CHECK(energy_b<Rat>(cg, kFieldX, rat(1), m) == rat(4, 9));
    CHECK(energy_b<Rat>(cg, kFieldX, rat(3, 2), m) == rat(3, 2) * rat(4, 9));
  }
  const Field<Rat> c0 = [](std::int64_t, std::int64_t, std::int64_t) { return rat(2); };
  CHECK(energy_b<Rat>(cg, c0, rat(3, 2), 2) == 0);
}

TEST_CASE("series and sup form") {
  // constant function: zero everywhere
  std::vector<double> zero(6, 0.0);
  CHECK(series_E(zero, 2.0).partial.back() == 0.0);
  CHECK(sup_form(zero, 2.0) == 0.0);

  // exact: D_n = (6/7)^n with weight 3^{beta-alpha} = 7/6 gives unit terms
  std::vector<Rat> D;
  for (int n = 1; n <= 9; ++n) D.push_back(rat_pow(rat(6, 7), n));
  const auto sums = series_E_exact(D, rat(7, 6));
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(sums[i] == rat(static_cast<long>(i) + 1));
  CHECK(sup_form_exact(D, rat(7, 6)) == 1);

  // u = x: D_n = (8/9)^n and 3^{2-alpha} = 9/8, so the sup is exactly 1
  std::vector<Rat> Dx;
  for (int n = 1; n <= 9; ++n) Dx.push_back(rat_pow(rat(8, 9), n));
  CHECK(sup_form_exact(Dx, rat(9, 8)) == 1);

  // partial sums and sup are nondecreasing in N (floating route)
  std::vector<double> Dd;
  for (int n = 1; n <= 9; ++n) Dd.push_back(std::pow(6.0 / 7.0, n));
  const auto s = series_E(Dd, 2.1);
  for (std::size_t i = 1; i < s.partial.size(); ++i) CHECK(s.partial[i] >= s.partial[i - 1]);
}

TEST_CASE("besov quadrature") {
  const Field<double> constf = [](std::int64_t, std::int64_t, std::int64_t) { return 1.0; };
  const auto zero = besov_quadrature(constf, 2.0, 2, 3);
  for (double v : zero.raw) CHECK(v == 0.0);

  const Field<double> fx = [](std::int64_t xn, std::int64_t, std::int64_t den) {
    return static_cast<double>(xn) / static_cast<double>(den);
  };
  const auto q = besov_quadrature(fx, 2.0, 3, 4);
  // shrinking annuli: raw integrals decrease in n
  for (std::size_t k = 1; k < q.raw.size(); ++k) CHECK(q.raw[k] <= q.raw[k - 1]);
  // the full double integral of (x-x')^2 over K^2 is 2 Var(x) = 3/16; the
  // n=0 annulus drops only the far pairs, so it sits just below that
  CHECK(q.raw[0] < 3.0 / 16.0 + 1e-12);
  CHECK(q.raw[0] > 0.8 * 3.0 / 16.0);

  // Monte-Carlo oracle for the n=0 annulus at depth 4
  {
    Rng rng(123);
    const std::int64_t den = ipow3(4);
    const std::uint64_t P = word_count(4, Mode::sc);
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (std::uint64_t c = 0; c < P; ++c) {
      const auto o = cell_origin(word_from_index(c, 4));
      pts.push_back({o.col, o.row});
    }
    double acc = 0;
    const int trials = 400000;
    for (int t = 0; t < trials; ++t) {
      const auto& a = pts[rng.below(P)];
      const auto& b = pts[rng.below(P)];
      const std::int64_t dx = a.first - b.first, dy = a.second - b.second;
      if (dx * dx + dy * dy >= den * den) continue;
      const double d = static_cast<double>(dx) / static_cast<double>(den);
      acc += d * d;
    }
    const double mc = acc / trials;
    CHECK(std::abs(mc - q.raw[0]) < 0.01 * q.raw[0] + 1e-4);
  }

  CHECK_THROWS_AS(besov_quadrature(fx, 2.0, 4, 3), input_error);
  CHECK_THROWS_AS(besov_quadrature(fx, 2.0, 4, 7, 5), capacity_error);
}

TEST_CASE("restriction to coarser vertex sets") {
  const Graph g2 = vertex_graph(2), g1 = vertex_graph(1);
  std::vector<double> u(static_cast<std::size_t>(g2.node_count()));
  for (std::int32_t i = 0; i < g2.node_count(); ++i)
    u[static_cast<std::size_t>(i)] =
        static_cast<double>(g2.points[static_cast<std::size_t>(i)].x) /
        static_cast<double>(g2.scale_den);
  const auto r = restrict_vertex_function(g2, u, g1);
  for (std::int32_t i = 0; i < g1.node_count(); ++i) {
    CHECK(r[static_cast<std::size_t>(i)] ==
          doctest::Approx(static_cast<double>(g1.points[static_cast<std::size_t>(i)].x) /
                          static_cast<double>(g1.scale_den)));
  }
}
