#pragma once

#include <span>
#include <vector>

#include "carpetlab/geometry.hpp"
#include "carpetlab/rational.hpp"

namespace carpetlab {

// Exact-arithmetic verification oracle: sparse Gaussian elimination
// (star-mesh reduction) on the weighted graph Laplacian with greedy
// min-degree ordering. Sized for cross-checking the iterative solver at
// small levels, not for production solves.

inline constexpr int kExactNodeCap = 2000;

struct ExactPin {
  std::int32_t node = 0;
  Rat value;
};

// Exact energy-minimizing extension of the pinned values; source adds a
// right-hand side (L u = source on free nodes).
std::vector<Rat> exact_solve(const Graph& g, const std::vector<ExactPin>& pins,
                             const std::vector<ExactPin>& source = {},
                             int node_cap = kExactNodeCap);

Rat exact_energy(const Graph& g, std::span<const Rat> u);

// Effective resistance between two disjoint node sets: short each set,
// eliminate everything else, read off the single remaining conductance.
Rat exact_resistance(const Graph& g, std::span<const std::int32_t> A,
                     std::span<const std::int32_t> B, int node_cap = kExactNodeCap);

}  // namespace carpetlab
