#pragma once

#include <span>
#include <vector>

#include "carpetlab/geometry.hpp"

namespace carpetlab {

struct BoundarySpec {
  std::vector<std::int32_t> nodes;
  std::vector<double> values;
};

struct SolveOptions {
  double tol = 1e-10;          // relative residual in the Jacobi-weighted norm
  double iter_cap_mult = 50.0;  // cap = mult * sqrt(free nodes)
  int threads = 1;
  const std::vector<double>* warm_start = nullptr;  // full-size initial guess
};

struct SolveReport {
  std::vector<double> u;
  int iterations = 0;
  double residual = 0;            // final relative residual
  double residual_inf = 0;        // max per-node harmonicity defect / degree
  double energy = 0;              // weighted Dirichlet energy of u
  double max_principle_excess = 0;  // overshoot beyond boundary range (no source)
};

// Energy minimizer subject to the pinned values: diagonally preconditioned
// conjugate gradients on the free-node system.
SolveReport solve_dirichlet(const Graph& g, const BoundarySpec& bc,
                            const SolveOptions& opt = {},
                            const std::vector<double>* source = nullptr);

double graph_energy(const Graph& g, std::span<const double> u);

double effective_resistance(const Graph& g, std::span<const std::int32_t> A,
                            std::span<const std::int32_t> B, const SolveOptions& opt = {},
                            SolveReport* report = nullptr);

// Green function of the ball with zero boundary ring: L g = delta_center.
SolveReport green_function(const Graph& ball, std::int32_t center,
                           const SolveOptions& opt = {});

// Network surgery. Shorting merges each group onto its first node (summing
// parallel conductances); cutting deletes the listed edges. node_map gets
// the old->new index mapping when provided.
Graph short_nodes(const Graph& g, const std::vector<std::vector<std::int32_t>>& groups,
                  std::vector<std::int32_t>* node_map = nullptr);
Graph cut_edges(const Graph& g, std::span<const std::size_t> edge_ids);

// Warm-start prolongation: each fine vertex copies the value of the nearest
// coarse vertex of a containing coarse cell.
std::vector<double> prolong_vertex_function(const Graph& coarse, std::span<const double> u,
                                            const Graph& fine);

}  // namespace carpetlab
