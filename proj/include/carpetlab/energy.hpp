#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "carpetlab/geometry.hpp"
#include "carpetlab/rational.hpp"

namespace carpetlab {

// Hausdorff dimension log 8 / log 3. Kept out of exact code paths: exact
// series use the rational weight 3^{beta-alpha} directly.
inline double alpha_dim() { return std::log(8.0) / std::log(3.0); }

inline double beta_star_of(double rho) { return std::log(8.0 * rho) / std::log(3.0); }

// Point-evaluable function on the carpet; arguments are the exact sample
// coordinates (xnum/den, ynum/den).
template <class T>
using Field = std::function<T(std::int64_t xnum, std::int64_t ynum, std::int64_t den)>;

// Graph Dirichlet energy: sum of weight * (u(p)-u(q))^2 over edges. Serves
// as D_n on vertex graphs (weights = per-cell multiplicities) and as
// frakD_n on cell graphs (unit weights).
template <class T>
T energy_D(const Graph& g, std::span<const T> u) {
  if (static_cast<std::int64_t>(u.size()) != g.node_count())
    throw input_error("energy_D: dimension mismatch");
  T acc{};
  for (const auto& e : g.edges) {
    T d = u[static_cast<std::size_t>(e.u)] - u[static_cast<std::size_t>(e.v)];
    if constexpr (std::is_same_v<T, Rat>) {
      acc += rat(static_cast<long>(e.w)) * d * d;
    } else {
      acc += e.w * d * d;
    }
  }
  return acc;
}

template <class T>
T energy_a(const Graph& g, std::span<const T> u, const T& rho) {
  T scale{1};
  for (int i = 0; i < g.level; ++i) scale *= rho;
  return scale * energy_D<T>(g, u);
}

// Mean value operator l(W_{n+m}) -> l(W_n): each parent value is the
// arithmetic mean of its 8^m descendants (word indices are base-8, so
// descendants of parent w are the contiguous block [w*8^m, (w+1)*8^m)).
template <class T>
std::vector<T> mean_operator(std::span<const T> child, int m) {
  if (m < 1) throw input_error("mean_operator: m must be >= 1");
  const std::uint64_t block = 1ull << (3 * m);  // 8^m
  if (child.size() % block != 0) throw input_error("mean_operator: level mismatch");
  const std::uint64_t parents = child.size() / block;
  std::vector<T> out(parents);
  for (std::uint64_t p = 0; p < parents; ++p) {
    T s{};
    for (std::uint64_t v = 0; v < block; ++v) s += child[p * block + v];
    if constexpr (std::is_same_v<T, Rat>) {
      out[p] = s / rat(static_cast<long>(block));
    } else {
      out[p] = s / static_cast<T>(block);
    }
  }
  return out;
}

// P_n u approximated by averaging u over the 8^m lower-left sample points
// f_{wv}(p_0), v in W_m, per level-n cell (uniform counting measure).
template <class T, class F>
std::vector<T> cell_average(F&& u, int n, int m) {
  if (n < 0 || m < 0) throw input_error("cell_average: negative level");
  const std::int64_t den = ipow3(n + m);
  const std::uint64_t cells = word_count(n, Mode::sc);
  const std::uint64_t block = word_count(m, Mode::sc);
  std::vector<T> out(cells);
  std::vector<int> digit(static_cast<std::size_t>(n + m), 0);
  // depth-first over the digit odometer, origin maintained incrementally
  std::vector<std::int64_t> cols(static_cast<std::size_t>(n + m) + 1, 0);
  std::vector<std::int64_t> rows(static_cast<std::size_t>(n + m) + 1, 0);
  std::uint64_t leaf = 0;
  T acc{};
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n + m) {
      acc += u(cols[static_cast<std::size_t>(depth)], rows[static_cast<std::size_t>(depth)], den);
      ++leaf;
      if (leaf % block == 0) {
        if constexpr (std::is_same_v<T, Rat>) {
          out[leaf / block - 1] = acc / rat(static_cast<long>(block));
        } else {
          out[leaf / block - 1] = acc / static_cast<T>(block);
        }
        acc = T{};
      }
      return;
    }
    for (int d = 0; d < 8; ++d) {
      cols[static_cast<std::size_t>(depth) + 1] = cols[static_cast<std::size_t>(depth)] * 3 + kOffX[d];
      rows[static_cast<std::size_t>(depth) + 1] = rows[static_cast<std::size_t>(depth)] * 3 + kOffY[d];
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// b_n(u) = rho^n * frakD_n(P_n u) with the sampled cell averages.
template <class T, class F>
T energy_b(const Graph& cell_g, F&& u, const T& rho, int m) {
  if (cell_g.kind != GraphKind::cell || cell_g.mode != Mode::sc)
    throw input_error("energy_b: needs an SC cell graph");
  const auto avg = cell_average<T>(std::forward<F>(u), cell_g.level, m);
  return energy_a<T>(cell_g, avg, rho);
}

// Partial sums of E_beta given the per-level energies D_1..D_N.
struct SeriesSums {
  std::vector<double> terms;     // 3^{(beta-alpha)n} * D_n
  std::vector<double> partial;   // running sums
  std::vector<double> tail_ratio;  // term_{n+1}/term_n where defined
};

SeriesSums series_E(std::span<const double> D, double beta);
std::vector<Rat> series_E_exact(std::span<const Rat> D, const Rat& weight3ba);

// max_{n<=N} 3^{(beta-alpha)n} D_n
double sup_form(std::span<const double> D, double beta);
Rat sup_form_exact(std::span<const Rat> D, const Rat& weight3ba);

// Annuli double sums of Lemma-style ball integrals at sampling depth m:
// raw[k] ~ int_K int_{B(x,3^-k)} (u(x)-u(y))^2 dnu dnu for k = 0..N.
struct QuadratureReport {
  int levels = 0;
  int depth = 0;
  std::vector<double> raw;
  std::vector<double> weighted;  // 3^{(alpha+beta)k} * raw[k]
  double partial_sum = 0;
};

QuadratureReport besov_quadrature(const Field<double>& u, double beta, int N, int m,
                                  int depth_cap = 5);

// Restriction of a level-N vertex function to V_n (V_n nested in V_N).
std::vector<double> restrict_vertex_function(const Graph& fine, std::span<const double> u,
                                             const Graph& coarse);

}  // namespace carpetlab
