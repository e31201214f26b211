#include "carpetlab/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace carpetlab {

bool digit_valid(int digit, Mode mode) {
  if (digit < 0 || digit > 7) return false;
  if (mode == Mode::cross && (digit == 3 || digit == 7)) return false;
  return true;
}

void validate_word(const Word& w) {
  for (auto d : w.digits) {
    if (!digit_valid(d, w.mode)) {
      throw input_error("invalid digit " + std::to_string(int(d)) + " for mode " +
                        mode_name(w.mode));
    }
  }
}

Word word_repeat(int digit, int n, Mode mode) {
  if (!digit_valid(digit, mode) || n < 0) throw input_error("word_repeat: bad digit or level");
  Word w{mode, std::vector<std::uint8_t>(static_cast<std::size_t>(n),
                                         static_cast<std::uint8_t>(digit))};
  return w;
}

Word word_from_index(std::uint64_t index, int n, Mode mode) {
  const int base = mode == Mode::sc ? 8 : 6;
  Word w{mode, std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  for (int i = n - 1; i >= 0; --i) {
    int d = static_cast<int>(index % base);
    index /= base;
    w.digits[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(mode == Mode::sc ? d : kCrossAlphabet[d]);
  }
  if (index != 0) throw input_error("word_from_index: index out of range");
  return w;
}

std::uint64_t word_index(const Word& w) {
  const int base = w.mode == Mode::sc ? 8 : 6;
  std::uint64_t idx = 0;
  for (auto d : w.digits) {
    int v = d;
    if (w.mode == Mode::cross) {
      // position of d in the cross alphabet
      v = d <= 2 ? d : d - 1;
    }
    idx = idx * base + static_cast<std::uint64_t>(v);
  }
  return idx;
}

std::uint64_t word_count(int n, Mode mode) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c *= (mode == Mode::sc ? 8u : 6u);
  return c;
}

CellOrigin cell_origin(const Word& w) {
  validate_word(w);
  CellOrigin o;
  o.level = w.level();
  for (auto d : w.digits) {
    o.col = o.col * 3 + kOffX[d];
    o.row = o.row * 3 + kOffY[d];
  }
  return o;
}

std::vector<GridPoint> cell_vertices(const Word& w) {
  const CellOrigin o = cell_origin(w);
  const std::int64_t x = 2 * o.col, y = 2 * o.row;
  // images of p_0..p_7 under f_w, counterclockwise
  const std::vector<GridPoint> all = {
      {x, y},     {x + 1, y},     {x + 2, y},     {x + 2, y + 1},
      {x + 2, y + 2}, {x + 1, y + 2}, {x, y + 2}, {x, y + 1},
  };
  if (w.mode == Mode::sc) return all;
  return {all[0], all[1], all[2], all[4], all[5], all[6]};
}

namespace {

inline std::uint64_t point_key(const GridPoint& p) {
  return (static_cast<std::uint64_t>(p.x) << 32) | static_cast<std::uint64_t>(p.y);
}

// Perimeter corner-midpoint pairs of one cell, as indices into the
// counterclockwise 8-point list.
constexpr int kPerimPairs[8][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                   {4, 5}, {5, 6}, {6, 7}, {7, 0}};

void finalize_edges(std::vector<Edge>& edges) {
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      merged.back().w += e.w;
    } else {
      merged.push_back(e);
    }
  }
  edges = std::move(merged);
}

}  // namespace

std::int32_t Graph::find_node(const GridPoint& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || *it != p) return -1;
  return static_cast<std::int32_t>(it - points.begin());
}

Graph vertex_graph(int n, Mode mode, int level_cap) {
  if (n < 1) throw input_error("vertex_graph: level must be >= 1");
  if (n > level_cap) throw capacity_error("vertex_graph: level exceeds cap");

  const std::uint64_t cells = word_count(n, mode);
  std::unordered_map<std::uint64_t, std::int32_t> index;
  index.reserve(cells * 5);
  std::vector<GridPoint> pts;
  pts.reserve(cells * 5);
  std::vector<Edge> edges;
  edges.reserve(cells * 8);

  auto intern = [&](const GridPoint& p) -> std::int32_t {
    auto [it, inserted] = index.try_emplace(point_key(p), static_cast<std::int32_t>(pts.size()));
    if (inserted) pts.push_back(p);
    return it->second;
  };

  for (std::uint64_t c = 0; c < cells; ++c) {
    const Word w = word_from_index(c, n, mode);
    const auto vs = cell_vertices(w);
    if (mode == Mode::sc) {
      std::int32_t id[8];
      for (int i = 0; i < 8; ++i) id[i] = intern(vs[i]);
      for (const auto& pr : kPerimPairs) edges.push_back({id[pr[0]], id[pr[1]], 1.0});
    } else {
      // six points: p0,p1,p2 | p4,p5,p6 -- only the bottom and top runs
      std::int32_t id[6];
      for (int i = 0; i < 6; ++i) id[i] = intern(vs[i]);
      edges.push_back({id[0], id[1], 1.0});
      edges.push_back({id[1], id[2], 1.0});
      edges.push_back({id[3], id[4], 1.0});
      edges.push_back({id[4], id[5], 1.0});
    }
  }

  // renumber nodes in sorted lexicographic order
  std::vector<std::int32_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](std::int32_t a, std::int32_t b) { return pts[a] < pts[b]; });
  std::vector<std::int32_t> rank(pts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) rank[perm[i]] = static_cast<std::int32_t>(i);
  std::vector<GridPoint> sorted(pts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = pts[perm[i]];
  for (auto& e : edges) {
    e.u = rank[e.u];
    e.v = rank[e.v];
  }
  finalize_edges(edges);

  Graph g;
  g.kind = GraphKind::vertex;
  g.mode = mode;
  g.level = n;
  g.scale_den = 2 * ipow3(n);
  g.points = std::move(sorted);
  g.edges = std::move(edges);
  return g;
}

Graph cell_graph(int n, Mode mode, int level_cap) {
  if (n < 1) throw input_error("cell_graph: level must be >= 1");
  if (n > level_cap) throw capacity_error("cell_graph: level exceeds cap");

  const std::int64_t side = ipow3(n);
  const std::uint64_t cells = word_count(n, mode);
  // dense origin -> word-index grid
  std::vector<std::int32_t> grid(static_cast<std::size_t>(side * side), -1);
  std::vector<GridPoint> origins(cells);
  for (std::uint64_t c = 0; c < cells; ++c) {
    const CellOrigin o = cell_origin(word_from_index(c, n, mode));
    origins[c] = {o.col, o.row};
    grid[static_cast<std::size_t>(o.row * side + o.col)] = static_cast<std::int32_t>(c);
  }

  std::vector<Edge> edges;
  for (std::int64_t r = 0; r < side; ++r) {
    for (std::int64_t c = 0; c < side; ++c) {
      const std::int32_t a = grid[static_cast<std::size_t>(r * side + c)];
      if (a < 0) continue;
      if (c + 1 < side) {
        const std::int32_t b = grid[static_cast<std::size_t>(r * side + c + 1)];
        if (b >= 0) edges.push_back({a, b, 1.0});
      }
      if (r + 1 < side) {
        const std::int32_t b = grid[static_cast<std::size_t>((r + 1) * side + c)];
        if (b >= 0) edges.push_back({a, b, 1.0});
      }
    }
  }
  finalize_edges(edges);

  Graph g;
  g.kind = GraphKind::cell;
  g.mode = mode;
  g.level = n;
  g.scale_den = side;
  g.points = std::move(origins);
  g.edges = std::move(edges);
  return g;
}

bool valid_origin(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) return false;
  while (a > 0 || b > 0) {
    if (a % 3 == 1 && b % 3 == 1) return false;
    a /= 3;
    b /= 3;
  }
  return true;
}

bool vinfty_member(const GridPoint& q) {
  if (q.x < 0 || q.y < 0) return false;
  const bool ox = q.x % 2 != 0, oy = q.y % 2 != 0;
  if (ox && oy) return false;
  if (!ox && !oy) {
    const std::int64_t x = q.x / 2, y = q.y / 2;
    for (std::int64_t a : {x - 1, x})
      for (std::int64_t b : {y - 1, y})
        if (valid_origin(a, b)) return true;
    return false;
  }
  if (ox) {
    // midpoint of the horizontal unit segment [(x,y),(x+1,y)]
    const std::int64_t x = (q.x - 1) / 2, y = q.y / 2;
    return valid_origin(x, y - 1) || valid_origin(x, y);
  }
  const std::int64_t x = q.x / 2, y = (q.y - 1) / 2;
  return valid_origin(x - 1, y) || valid_origin(x, y);
}

std::vector<GridPoint> vinfty_neighbors(const GridPoint& q) {
  std::vector<GridPoint> out;
  const bool ox = q.x % 2 != 0, oy = q.y % 2 != 0;
  auto push = [&](std::int64_t x, std::int64_t y) {
    GridPoint p{x, y};
    if (vinfty_member(p)) out.push_back(p);
  };
  if (!ox && !oy) {
    push(q.x - 1, q.y);
    push(q.x + 1, q.y);
    push(q.x, q.y - 1);
    push(q.x, q.y + 1);
  } else if (ox) {
    push(q.x - 1, q.y);
    push(q.x + 1, q.y);
  } else {
    push(q.x, q.y - 1);
    push(q.x, q.y + 1);
  }
  return out;
}

Graph vinfty_ball(const GridPoint& z, int r, std::int64_t node_cap) {
  if (!vinfty_member(z)) throw input_error("vinfty_ball: center not in V_infty");
  if (r < 0) throw input_error("vinfty_ball: negative radius");

  std::unordered_map<std::uint64_t, int> dist;
  auto key = [](const GridPoint& p) {
    return (static_cast<std::uint64_t>(p.x) << 32) | static_cast<std::uint64_t>(p.y);
  };
  std::vector<GridPoint> nodes;
  std::queue<GridPoint> frontier;
  dist[key(z)] = 0;
  nodes.push_back(z);
  frontier.push(z);
  while (!frontier.empty()) {
    const GridPoint p = frontier.front();
    frontier.pop();
    const int dp = dist[key(p)];
    if (dp == r) continue;
    for (const auto& q : vinfty_neighbors(p)) {
      if (dist.try_emplace(key(q), dp + 1).second) {
        nodes.push_back(q);
        if (static_cast<std::int64_t>(nodes.size()) > node_cap)
          throw capacity_error("vinfty_ball: node cap exceeded");
        frontier.push(q);
      }
    }
  }

  std::sort(nodes.begin(), nodes.end());
  Graph g;
  g.kind = GraphKind::ball;
  g.level = 0;
  g.scale_den = 2;
  g.points = nodes;
  g.boundary.assign(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (dist[key(nodes[i])] == r) g.boundary[i] = 1;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& q : vinfty_neighbors(nodes[i])) {
      auto it = dist.find(key(q));
      if (it == dist.end()) continue;
      const std::int32_t j = g.find_node(q);
      if (j > static_cast<std::int32_t>(i)) {
        g.edges.push_back({static_cast<std::int32_t>(i), j, 1.0});
      }
    }
  }
  finalize_edges(g.edges);
  return g;
}

GridPoint dihedral_apply(int which, const GridPoint& p, std::int64_t s) {
  const std::int64_t x = p.x, y = p.y;
  switch (which & 7) {
    case 0: return {x, y};
    case 1: return {y, s - x};          // rot 90
    case 2: return {s - x, s - y};      // rot 180
    case 3: return {s - y, x};          // rot 270
    case 4: return {s - x, y};          // mirror x
    case 5: return {x, s - y};          // mirror y
    case 6: return {y, x};              // diagonal
    default: return {s - y, s - x};     // anti-diagonal
  }
}

bool graph_connected(const Graph& g) {
  const std::int32_t n = g.node_count();
  if (n == 0) return true;
  std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(n));
  for (const auto& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<std::int32_t> q;
  q.push(0);
  seen[0] = 1;
  std::int32_t cnt = 1;
  while (!q.empty()) {
    const std::int32_t u = q.front();
    q.pop();
    for (auto v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++cnt;
        q.push(v);
      }
    }
  }
  return cnt == n;
}

std::string mode_name(Mode mode) { return mode == Mode::sc ? "sc" : "cross"; }

}  // namespace carpetlab
