#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carpetlab/energy.hpp"
#include "carpetlab/geometry.hpp"
#include "carpetlab/solver.hpp"
#include "carpetlab/special.hpp"

namespace carpetlab {

// splitmix64: portable deterministic stream for reproducible reports
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  Rng r(seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b << 24) ^ (c << 48));
  return r.next();
}

struct RatioReport {
  std::string claim;
  std::vector<std::string> labels;
  std::vector<double> ratios;
  double max_ratio = 0;
  double min_ratio = 0;
  double drift = 1;  // running-max growth across the level range
  bool pass = true;
};

void finalize_ratios(RatioReport& rep);

// a_n(u)/a_{n+m}(u) on the harmonic family, u = u_{n_max} restricted to the
// coarser vertex sets.
RatioReport monotonicity_a(const GoodFunctionFamily& fam, double rho_hat);

// B_n(M_{n,m} c) / B_{n+m}(c) over random rational and structured cell
// functions (exact arithmetic, reported as doubles).
RatioReport monotonicity_B(int level_total_max, int draws, std::uint64_t seed, double rho_hat);

struct EquivalenceInputs {
  std::string name;
  Field<double> u;
};

struct EquivalenceConfig {
  std::vector<double> betas;
  int n_max = 5;
  int avg_depth_offset = 4;  // P_n sampled at depth n + offset
  int quad_levels = 4;
  int quad_depth = 5;
  double window_lo = 1e-2;
  double window_hi = 1e2;
};

// Pairwise ratios among the graph series E_beta, the cell series frakE_beta
// and the annuli quadrature.
RatioReport equivalence_report(const std::vector<EquivalenceInputs>& funcs,
                               const EquivalenceConfig& cfg);

struct HarnackConfig {
  std::vector<int> levels = {3, 4, 5, 6};
  double radius = 0.25;
  double delta = 0.5;
  int draws = 20;
  std::uint64_t seed = 1;
  bool include_un_configuration = true;
};

struct HarnackReport {
  std::vector<int> levels;
  std::vector<double> C_H;  // worst max/min ratio per level
  double stability = 0;     // max C_H / min C_H
  bool stable = false;      // < 2
  RatioReport detail;
};

HarnackReport harnack_ratios(const HarnackConfig& cfg, const SolveOptions& opt = {});

struct HolderReport {
  double theta_hat = 0;
  double reference = 0;  // (beta*-alpha)/2
  int pairs_used = 0;
};

HolderReport holder_exponent(const Graph& g, std::span<const double> u, double beta_star_hat,
                             int sample_pairs, std::uint64_t seed);

struct BlowupReport {
  double beta = 0;
  std::vector<double> terms;  // 3^{(beta-alpha)n} D_n
  double growth = 0;          // fitted per-level factor
  bool pass = false;          // growth > 1
};

BlowupReport besov_blowup(std::span<const double> D, double beta);

struct ApproxLocalReport {
  std::vector<double> betas;
  std::vector<double> scaled;  // (beta*-beta) * E_beta partial sum
  double sup = 0;              // sup form at beta*
  std::vector<double> ratio;
  bool bounded = false;
};

ApproxLocalReport approx_local(std::span<const double> D, std::span<const double> betas,
                               double beta_star, double window_lo = 0.05, double window_hi = 20.0);

}  // namespace carpetlab
