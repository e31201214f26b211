#pragma once

#include <string>
#include <vector>

#include "carpetlab/geometry.hpp"
#include "carpetlab/solver.hpp"

namespace carpetlab {

struct SeriesReport {
  std::string quantity;
  std::vector<int> levels;
  std::vector<double> values;
};

struct RhoEstimate {
  double rho_hat = 0;
  double beta_star_hat = 0;
  std::vector<double> ratios;  // successive values v_{n+1}/v_n
  bool in_hard_bounds = false;  // [7/6, 3/2]
  bool in_soft_window = false;  // [1.20, 1.30]
  int dropped = 0;
};

// rho from the least-squares slope of log value vs level; the first
// `drop` levels are excluded as transient.
RhoEstimate estimate_rho(const SeriesReport& s, int drop = 1);

// Offset-robust variant: fits the slope of log successive increments
// x_{n+1} - x_n. For series of the form c*rho^n - A (the shape the
// point-terminal resistances follow at desk scale) the increments are
// exactly geometric, so the additive transient cancels.
RhoEstimate estimate_rho_increment(const SeriesReport& s, int drop = 1);

struct MultiplicativityReport {
  double C_hat = 0;
  std::vector<double> C_by_prefix;  // values for n+m <= L, L = 2..N
  bool stable = false;              // max <= 2*min across prefixes
};

MultiplicativityReport multiplicativity_check(const SeriesReport& s);

struct CornerSeries {
  SeriesReport RV, R01, R15, R04;
  std::vector<double> symmetry_gap;  // |R15 - R37| / R15 per level
};

// R_n^V and the corner-pair resistances on the weighted vertex graphs,
// n = 1..n_max, warm-started across levels.
CornerSeries corner_resistances(int n_max, const SolveOptions& opt = {});

struct CellSeries {
  SeriesReport N01, N04, N15;
  std::vector<double> symmetry_gap;  // |N15 - N37| / N15
};

CellSeries cell_resistances(int n_max, const SolveOptions& opt = {});

struct ChainBound {
  double bound = 0;
  double direct = 0;
  std::vector<double> legs;
};

// Telescoping word chain w -> 0^n: resistance triangle-inequality bound
// against the direct value.
ChainBound chain_bound(const Word& w, const SolveOptions& opt = {});

struct VinftyScaling {
  std::vector<int> radii;
  std::vector<double> R;    // R(z, ball complement)
  std::vector<double> gzz;  // Green value at the center
  double gamma_R = 0;       // slope of log R vs log r
  double gamma_g = 0;
  double distortion_max = 1;  // graph vs Euclidean distance
};

VinftyScaling vinfty_scaling(const GridPoint& z, const std::vector<int>& radii,
                             const SolveOptions& opt = {});

double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace carpetlab
