#pragma once

#include <vector>

#include "carpetlab/geometry.hpp"
#include "carpetlab/rational.hpp"
#include "carpetlab/solver.hpp"

namespace carpetlab {

// Self-affine boundary profile: f(0)=0, f(1)=1, and on each triadic interval
// the increments split in the ratio 2/7 : 3/7 : 2/7.
Rat f_triadic(std::int64_t i, int n);

// U(x,y) = f(x) evaluated at a vertex abscissa X / (2*3^n). Odd X lands on
// the midpoint of a triadic interval, where the affine branch of the
// recursion gives the mean of the endpoint values.
Rat good_value_x(std::int64_t X, int n);

// Floating evaluation of f at an arbitrary rational in [0,1] by walking the
// base-3 expansion (cut off far below double precision).
double f_real(std::int64_t num, std::int64_t den);

inline constexpr int kRationalCapLevel = 8;

// D_n of U, exact. Horizontal-pair contributions are grouped by triadic
// column (vertical pairs vanish since U is independent of y); per-column
// cell counts come from the digit combinatorics checked in the tests.
Rat good_energy(int n, int cap = kRationalCapLevel);

Rat phi_eval(const Rat& x, const Rat& y);

struct PhiMin {
  Rat x, y, value;
};

// Exact stationary point of 3x^2 + 2(x-y)^2 + 3(1-y)^2.
PhiMin phi_minimize();

// D_n of u(x,y)=x on the Cantor-cross approximation, exact.
Rat cantor_energy(int n, int cap = kRationalCapLevel);

struct HarmonicLevel {
  Graph graph;
  SolveReport sol;
  double symmetry_residual = 0;  // u(x,y) vs 1-u(S-x,y) and u(x,S-y)
  double midline_residual = 0;   // |u - 1/2| on x = 1/2
};

// The level-n energy minimizer with the left edge pinned to 0 and the right
// edge pinned to 1.
HarmonicLevel harmonic_un(int n, const SolveOptions& opt = {},
                          const HarmonicLevel* prev = nullptr);

struct GoodFunctionFamily {
  std::vector<HarmonicLevel> levels;      // index k holds level k+1
  std::vector<double> sup_diff_interior;  // sup |u_{n+1}-u_n| on V_n, x in [1/4,3/4]
};

GoodFunctionFamily good_function_limit(int n_max, const SolveOptions& opt = {});

std::vector<std::int32_t> nodes_on_line_x(const Graph& g, std::int64_t X);
std::vector<std::int32_t> nodes_on_line_y(const Graph& g, std::int64_t Y);

}  // namespace carpetlab
