#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carpetlab/errors.hpp"

namespace carpetlab {

// Carpet cells are addressed over digits 0..7; the Cantor-cross variant
// drops the two side-midpoint maps and uses {0,1,2,4,5,6}.
enum class Mode { sc, cross };

// Digit offsets 2*p_i of the eight contraction maps, in units of 1/3.
inline constexpr int kOffX[8] = {0, 1, 2, 2, 2, 1, 0, 0};
inline constexpr int kOffY[8] = {0, 0, 0, 1, 2, 2, 2, 1};

inline constexpr int kCrossAlphabet[6] = {0, 1, 2, 4, 5, 6};

bool digit_valid(int digit, Mode mode);

constexpr std::int64_t ipow3(int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

// A level-n cell address; digit 0 is the coarsest.
struct Word {
  Mode mode = Mode::sc;
  std::vector<uint8_t> digits;

  int level() const { return static_cast<int>(digits.size()); }
};

void validate_word(const Word& w);
Word word_repeat(int digit, int n, Mode mode = Mode::sc);
// Index <-> word bijections in lexicographic digit order (base 8 for the
// carpet, base 6 over the cross alphabet).
Word word_from_index(std::uint64_t index, int n, Mode mode = Mode::sc);
std::uint64_t word_index(const Word& w);
std::uint64_t word_count(int n, Mode mode);

// Lower-left corner of K_w in units of 3^{-n}.
struct CellOrigin {
  std::int64_t col = 0;
  std::int64_t row = 0;
  int level = 0;
};

CellOrigin cell_origin(const Word& w);

// Exact vertex coordinate at scale 1/(2*3^n); V_infty points use scale 1/2.
struct GridPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Corners and edge midpoints of K_w, counterclockwise from the lower-left
// corner, at scale 2*3^n. Cross mode omits the left/right side midpoints.
std::vector<GridPoint> cell_vertices(const Word& w);

struct Edge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double w = 1.0;
};

enum class GraphKind { vertex, cell, ball };

struct Graph {
  GraphKind kind = GraphKind::vertex;
  Mode mode = Mode::sc;
  int level = 0;
  // Coordinates are points[i] / scale_den. Cell graphs store cell origins
  // (scale_den = 3^n) indexed by word order; vertex/ball graphs store
  // lattice points in sorted lexicographic order.
  std::int64_t scale_den = 1;
  std::vector<GridPoint> points;
  std::vector<Edge> edges;
  std::vector<std::uint8_t> boundary;  // ball graphs: 1 on the outer ring

  std::int32_t node_count() const { return static_cast<std::int32_t>(points.size()); }
  // Binary search over the sorted point list; -1 if absent. Cell graphs are
  // indexed by word order, use word_index instead.
  std::int32_t find_node(const GridPoint& p) const;
};

inline constexpr int kDefaultLevelCap = 6;

Graph vertex_graph(int n, Mode mode = Mode::sc, int level_cap = kDefaultLevelCap);
Graph cell_graph(int n, Mode mode = Mode::sc, int level_cap = kDefaultLevelCap + 1);

// Membership in the infinite graphical carpet (first quadrant, coordinates
// at scale 1/2): corners and edge midpoints of unit cells whose origin has
// no base-3 digit pair (1,1).
bool vinfty_member(const GridPoint& q);
bool valid_origin(std::int64_t a, std::int64_t b);
std::vector<GridPoint> vinfty_neighbors(const GridPoint& q);

// Closed graph-distance ball around z; nodes at distance exactly r are
// flagged as boundary. The infinite graph is never materialized.
Graph vinfty_ball(const GridPoint& z, int r, std::int64_t node_cap = 2'000'000);

// The eight square symmetries acting on coordinates in [0, s]^2.
GridPoint dihedral_apply(int which, const GridPoint& p, std::int64_t s);

bool graph_connected(const Graph& g);

std::string mode_name(Mode mode);

}  // namespace carpetlab
