#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "carpetlab/geometry.hpp"

using namespace carpetlab;

namespace {

// Brute-force edge oracle: every pair of level-n vertices at distance
// 3^{-n}/2 inside a common cell, with the number of contributing cells.
std::map<std::pair<GridPoint, GridPoint>, int> pair_multiplicities(int n, Mode mode) {
  std::map<std::pair<GridPoint, GridPoint>, int> mult;
  for (std::uint64_t c = 0; c < word_count(n, mode); ++c) {
    const auto vs = cell_vertices(word_from_index(c, n, mode));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const auto dx = vs[i].x - vs[j].x, dy = vs[i].y - vs[j].y;
        if (dx * dx + dy * dy == 1) {
          auto key = std::minmax(vs[i], vs[j]);
          ++mult[{key.first, key.second}];
        }
      }
    }
  }
  return mult;
}

}  // namespace

TEST_CASE("cell origins") {
  CHECK(cell_origin(Word{Mode::sc, {0, 0}}).col == 0);
  CHECK(cell_origin(Word{Mode::sc, {0, 0}}).row == 0);
  const auto o4 = cell_origin(Word{Mode::sc, {4}});
  CHECK(o4.col == 2);
  CHECK(o4.row == 2);
  const auto o15 = cell_origin(Word{Mode::sc, {1, 5}});
  CHECK(o15.col == 4);
  CHECK(o15.row == 2);
  CHECK_THROWS_AS(cell_origin(Word{Mode::sc, {8}}), input_error);
  CHECK_THROWS_AS(cell_origin(Word{Mode::cross, {3}}), input_error);
}

TEST_CASE("cell_origin is injective onto valid origins") {
  for (int n = 1; n <= 4; ++n) {
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::uint64_t c = 0; c < word_count(n, Mode::sc); ++c) {
      const auto o = cell_origin(word_from_index(c, n));
      CHECK(valid_origin(o.col, o.row));
      CHECK(seen.insert({o.col, o.row}).second);
    }
    // image is exactly the valid origins
    std::int64_t valid = 0;
    for (std::int64_t a = 0; a < ipow3(n); ++a)
      for (std::int64_t b = 0; b < ipow3(n); ++b)
        if (valid_origin(a, b)) ++valid;
    CHECK(valid == static_cast<std::int64_t>(seen.size()));
  }
}

TEST_CASE("cell vertices") {
  const auto v0 = cell_vertices(Word{Mode::sc, {}});
  REQUIRE(v0.size() == 8);
  CHECK(v0[0] == GridPoint{0, 0});
  CHECK(v0[1] == GridPoint{1, 0});
  CHECK(v0[4] == GridPoint{2, 2});
  CHECK(v0[7] == GridPoint{0, 1});

  const auto v = cell_vertices(Word{Mode::sc, {0}});
  const std::vector<GridPoint> expect = {{0, 0}, {1, 0}, {2, 0}, {2, 1},
                                         {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  CHECK(v == expect);

  CHECK(cell_vertices(Word{Mode::cross, {0}}).size() == 6);
}

TEST_CASE("vertex graph level 1") {
  const Graph g = vertex_graph(1);
  CHECK(g.node_count() == 40);
  double incidences = 0;
  for (const auto& e : g.edges) incidences += e.w;
  CHECK(incidences == 64);  // 8 per cell
  for (const auto& e : g.edges) CHECK((e.w == 1 || e.w == 2));
  CHECK(graph_connected(g));
  CHECK_THROWS_AS(vertex_graph(0), input_error);
  CHECK_THROWS_AS(vertex_graph(9, Mode::sc, 6), capacity_error);
}

TEST_CASE("vertex graph matches the pair enumeration oracle") {
  for (int n : {1, 2}) {
    for (Mode mode : {Mode::sc, Mode::cross}) {
      const Graph g = vertex_graph(n, mode);
      const auto oracle = pair_multiplicities(n, mode);
      REQUIRE(g.edges.size() == oracle.size());
      for (const auto& e : g.edges) {
        const auto a = g.points[static_cast<std::size_t>(e.u)];
        const auto b = g.points[static_cast<std::size_t>(e.v)];
        const auto it = oracle.find(std::minmax(a, b));
        REQUIRE(it != oracle.end());
        CHECK(e.w == it->second);
      }
    }
  }
}

TEST_CASE("every distance-(1/2) vertex pair lies in a common cell") {
  // resolves the edge-rule question: no extra pairs exist at small levels
  for (int n : {1, 2, 3}) {
    const Graph g = vertex_graph(n);
    const auto oracle = pair_multiplicities(n, Mode::sc);
    std::int64_t close_pairs = 0;
    for (std::int32_t i = 0; i < g.node_count(); ++i) {
      for (std::int32_t j = i + 1; j < g.node_count(); ++j) {
        const auto a = g.points[static_cast<std::size_t>(i)];
        const auto b = g.points[static_cast<std::size_t>(j)];
        const auto dx = a.x - b.x, dy = a.y - b.y;
        if (dx * dx + dy * dy == 1) ++close_pairs;
      }
    }
    CHECK(close_pairs == static_cast<std::int64_t>(oracle.size()));
  }
}

TEST_CASE("node and incidence counts follow the cell combinatorics") {
  for (int n = 1; n <= 4; ++n) {
    const Graph g = vertex_graph(n);
    double incidences = 0;
    for (const auto& e : g.edges) incidences += e.w;
    CHECK(incidences == 8.0 * static_cast<double>(word_count(n, Mode::sc)));
    CHECK(graph_connected(g));
  }
}

TEST_CASE("cell graph level 1 is the 8-ring") {
  const Graph g = cell_graph(1);
  CHECK(g.node_count() == 8);
  REQUIRE(g.edges.size() == 8);
  // ring adjacency in word order 0-1-2-3-4-5-6-7-0
  std::set<std::pair<int, int>> want = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                        {4, 5}, {5, 6}, {6, 7}, {0, 7}};
  for (const auto& e : g.edges) {
    CHECK(want.count({e.u, e.v}) == 1);
    CHECK(e.w == 1);
  }
}

TEST_CASE("cell graph level 2 matches the side-sharing oracle") {
  const Graph g = cell_graph(2);
  CHECK(g.node_count() == 64);
  // brute force over all pairs: edge iff origins differ by one unit in
  // exactly one coordinate
  std::int64_t expect = 0;
  for (std::uint64_t a = 0; a < 64; ++a) {
    const auto oa = cell_origin(word_from_index(a, 2));
    for (std::uint64_t b = a + 1; b < 64; ++b) {
      const auto ob = cell_origin(word_from_index(b, 2));
      const auto dx = std::abs(oa.col - ob.col), dy = std::abs(oa.row - ob.row);
      if (dx + dy == 1) ++expect;
    }
  }
  CHECK(static_cast<std::int64_t>(g.edges.size()) == expect);
  CHECK(expect == 88);  // 8 rings of 8 plus 3 crossings per shared side
  CHECK(graph_connected(g));
  for (int n = 3; n <= 5; ++n) CHECK(graph_connected(cell_graph(n)));
}

TEST_CASE("dihedral symmetries act as graph automorphisms") {
  for (int n : {1, 2, 3}) {
    const Graph g = vertex_graph(n);
    const std::int64_t S = g.scale_den;
    std::set<std::tuple<std::int32_t, std::int32_t, double>> edges;
    for (const auto& e : g.edges) edges.insert({e.u, e.v, e.w});
    for (int sym = 0; sym < 8; ++sym) {
      for (const auto& e : g.edges) {
        const auto pa = dihedral_apply(sym, g.points[static_cast<std::size_t>(e.u)], S);
        const auto pb = dihedral_apply(sym, g.points[static_cast<std::size_t>(e.v)], S);
        const auto ia = g.find_node(pa), ib = g.find_node(pb);
        REQUIRE(ia >= 0);
        REQUIRE(ib >= 0);
        CHECK(edges.count({std::min(ia, ib), std::max(ia, ib), e.w}) == 1);
      }
    }
  }
  // same symmetry action on the cell graph via origins
  for (int n : {1, 2}) {
    const Graph g = cell_graph(n);
    const std::int64_t S = ipow3(n) - 1;
    std::map<std::pair<std::int64_t, std::int64_t>, std::int32_t> by_origin;
    for (std::int32_t i = 0; i < g.node_count(); ++i)
      by_origin[{g.points[static_cast<std::size_t>(i)].x, g.points[static_cast<std::size_t>(i)].y}] = i;
    std::set<std::pair<std::int32_t, std::int32_t>> edges;
    for (const auto& e : g.edges) edges.insert({e.u, e.v});
    for (int sym = 0; sym < 8; ++sym) {
      for (const auto& e : g.edges) {
        const auto pa = dihedral_apply(sym, g.points[static_cast<std::size_t>(e.u)], S);
        const auto pb = dihedral_apply(sym, g.points[static_cast<std::size_t>(e.v)], S);
        const auto ia = by_origin.at({pa.x, pa.y}), ib = by_origin.at({pb.x, pb.y});
        CHECK(edges.count({std::min(ia, ib), std::max(ia, ib)}) == 1);
      }
    }
  }
}

TEST_CASE("V_infty membership") {
  CHECK(vinfty_member({0, 0}));
  CHECK(vinfty_member({1, 0}));
  CHECK(vinfty_member({2, 3}));   // left edge midpoint of the hole cell
  CHECK_FALSE(vinfty_member({3, 3}));  // parity
  CHECK_FALSE(vinfty_member({-1, 0}));
  // center column of the hole cell (1,1): the vertical segment x=3/2 has
  // no valid cell on either side at scale 1
  CHECK_FALSE(valid_origin(1, 1));
  CHECK(valid_origin(4, 6));
  CHECK_FALSE(valid_origin(4, 7));  // digits pair (1,1) in the last place
  CHECK_FALSE(valid_origin(4, 4));
}

TEST_CASE("V_infty balls") {
  // degree of the origin corner is 2
  const Graph b1 = vinfty_ball({0, 0}, 1);
  CHECK(b1.node_count() == 3);
  CHECK(b1.edges.size() == 2);
  int boundary = 0;
  for (auto f : b1.boundary) boundary += f;
  CHECK(boundary == 2);

  const Graph b0 = vinfty_ball({0, 0}, 0);
  CHECK(b0.node_count() == 1);

  CHECK_THROWS_AS(vinfty_ball({3, 3}, 1), input_error);

  // neighbors must alternate corner/midpoint and stay members
  const Graph b5 = vinfty_ball({4, 4}, 5);
  CHECK(graph_connected(b5));
  for (const auto& e : b5.edges) {
    const auto a = b5.points[static_cast<std::size_t>(e.u)];
    const auto b = b5.points[static_cast<std::size_t>(e.v)];
    const auto dx = a.x - b.x, dy = a.y - b.y;
    CHECK(dx * dx + dy * dy == 1);
  }
}

TEST_CASE("word index round trip") {
  for (Mode mode : {Mode::sc, Mode::cross}) {
    for (int n : {1, 2, 3}) {
      for (std::uint64_t i = 0; i < word_count(n, mode); ++i) {
        CHECK(word_index(word_from_index(i, n, mode)) == i);
      }
    }
  }
}
