#include <doctest.h>

#include <cmath>

#include "carpetlab/energy.hpp"
#include "carpetlab/exact.hpp"
#include "carpetlab/special.hpp"

using namespace carpetlab;

namespace {

// Independent route: evaluate U(x,y) = f(x) on the real vertex graph and
// sum the weighted edge energy exactly.
Rat good_energy_graph(int n) {
  const Graph g = vertex_graph(n);
  std::vector<Rat> u(static_cast<std::size_t>(g.node_count()));
  for (std::int32_t i = 0; i < g.node_count(); ++i)
    u[static_cast<std::size_t>(i)] = good_value_x(g.points[static_cast<std::size_t>(i)].x, n);
  return energy_D<Rat>(g, u);
}

Rat cantor_energy_graph(int n) {
  const Graph g = vertex_graph(n, Mode::cross);
  std::vector<Rat> u(static_cast<std::size_t>(g.node_count()));
  for (std::int32_t i = 0; i < g.node_count(); ++i)
    u[static_cast<std::size_t>(i)] = rat(g.points[static_cast<std::size_t>(i)].x, g.scale_den);
  return energy_D<Rat>(g, u);
}

}  // namespace

TEST_CASE("triadic profile values") {
  CHECK(f_triadic(0, 0) == 0);
  CHECK(f_triadic(1, 0) == 1);
  CHECK(f_triadic(1, 1) == rat(2, 7));
  CHECK(f_triadic(2, 1) == rat(5, 7));
  CHECK(f_triadic(4, 2) == rat(20, 49));
  CHECK_THROWS_AS(f_triadic(4, 1), input_error);
  CHECK_THROWS_AS(f_triadic(-1, 1), input_error);
}

TEST_CASE("triadic profile structure") {
  // refinement consistency, strict monotonicity, symmetry 1-f(1-t)=f(t)
  for (int n = 1; n <= 5; ++n) {
    const std::int64_t den = ipow3(n);
    Rat prev(-1);
    for (std::int64_t i = 0; i <= den; ++i) {
      const Rat v = f_triadic(i, n);
      CHECK(v > prev);
      prev = v;
      CHECK(v == f_triadic(3 * i, n + 1));
      CHECK(f_triadic(den - i, n) == 1 - v);
      CHECK(is_triadic7(v));
    }
  }
  // midpoint values average the endpoints
  CHECK(good_value_x(1, 1) == (f_triadic(0, 1) + f_triadic(1, 1)) / 2);
  CHECK(good_value_x(5, 1) == (f_triadic(2, 1) + f_triadic(3, 1)) / 2);
}

TEST_CASE("floating profile agrees with the exact one") {
  for (int n : {1, 3, 5}) {
    const std::int64_t den = ipow3(n);
    for (std::int64_t i = 0; i <= den; ++i) {
      CHECK(std::abs(f_real(i, den) - f_triadic(i, n).get_d()) < 1e-14);
    }
  }
  CHECK(f_real(1, 2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("good function energy identity") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(good_energy(n) == rat_pow(rat(6, 7), n));
  }
  // the induction step, exactly
  for (int n = 1; n <= 7; ++n) {
    CHECK(good_energy(n + 1) == rat(6, 7) * good_energy(n));
  }
  // independent graph route, including the direct n=3 value 216/343
  for (int n = 1; n <= 4; ++n) CHECK(good_energy_graph(n) == good_energy(n));
  CHECK(good_energy_graph(3) == rat(216, 343));
  CHECK_THROWS_AS(good_energy(9), capacity_error);
  CHECK_THROWS_AS(good_energy(0), input_error);
}

TEST_CASE("phi minimization") {
  const auto m = phi_minimize();
  CHECK(m.x == rat(2, 7));
  CHECK(m.y == rat(5, 7));
  CHECK(m.value == rat(6, 7));
  CHECK(phi_eval(m.x, m.y) == m.value);
  // a stationary point of a positive definite quadratic is the minimum
  CHECK(phi_eval(m.x + rat(1, 13), m.y) > m.value);
  CHECK(phi_eval(m.x, m.y - rat(1, 13)) > m.value);
  CHECK(phi_eval(rat(0), rat(1)) > m.value);
}

TEST_CASE("cantor cross energy identity") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(cantor_energy(n) == rat_pow(rat(2, 3), n));
  }
  for (int n = 1; n <= 7; ++n) {
    CHECK(cantor_energy(n + 1) == rat(2, 3) * cantor_energy(n));
  }
  for (int n = 1; n <= 3; ++n) CHECK(cantor_energy_graph(n) == cantor_energy(n));
  CHECK(cantor_energy_graph(3) == rat(8, 27));
  CHECK_THROWS_AS(cantor_energy(9), capacity_error);
}

TEST_CASE("harmonic minimizer u_n") {
  SolveOptions opt;
  opt.tol = 1e-12;
  const auto l2 = harmonic_un(2, opt);
  CHECK(l2.symmetry_residual < 1e-9);
  CHECK(l2.midline_residual < 1e-9);

  // matches the exact oracle at level 1
  const auto l1 = harmonic_un(1, opt);
  std::vector<ExactPin> pins;
  for (auto i : nodes_on_line_x(l1.graph, 0)) pins.push_back({i, rat(0)});
  for (auto i : nodes_on_line_x(l1.graph, l1.graph.scale_den)) pins.push_back({i, rat(1)});
  const auto oracle = exact_solve(l1.graph, pins);
  for (std::int32_t i = 0; i < l1.graph.node_count(); ++i)
    CHECK(std::abs(l1.sol.u[static_cast<std::size_t>(i)] -
                   oracle[static_cast<std::size_t>(i)].get_d()) < 1e-10);

  // D_n(u_n) = 1/R_n^V: energy of the minimizer equals the exact value
  const auto A = nodes_on_line_x(l1.graph, 0);
  const auto B = nodes_on_line_x(l1.graph, l1.graph.scale_den);
  const Rat RV = exact_resistance(l1.graph, A, B);
  CHECK(RV == rat(13, 11));
  CHECK(std::abs(l1.sol.energy - 1.0 / RV.get_d()) < 1e-10);

  // left half strictly below 1/2
  for (std::int32_t i = 0; i < l2.graph.node_count(); ++i) {
    if (2 * l2.graph.points[static_cast<std::size_t>(i)].x < l2.graph.scale_den)
      CHECK(l2.sol.u[static_cast<std::size_t>(i)] < 0.5 + 1e-10);
  }
}

TEST_CASE("good function family diagnostics") {
  SolveOptions opt;
  opt.tol = 1e-11;
  const auto fam = good_function_limit(3, opt);
  REQUIRE(fam.levels.size() == 3);
  REQUIRE(fam.sup_diff_interior.size() == 2);
  // interior sup differences shrink with the level
  CHECK(fam.sup_diff_interior[1] <= fam.sup_diff_interior[0]);
  // boundary values are exact
  for (const auto& lvl : fam.levels) {
    for (auto i : nodes_on_line_x(lvl.graph, 0))
      CHECK(lvl.sol.u[static_cast<std::size_t>(i)] == 0.0);
    for (auto i : nodes_on_line_x(lvl.graph, lvl.graph.scale_den))
      CHECK(lvl.sol.u[static_cast<std::size_t>(i)] == 1.0);
  }
}
