#include "carpetlab/exact.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "carpetlab/errors.hpp"

namespace carpetlab {

namespace {

using AdjRow = std::map<std::int32_t, Rat>;

std::vector<AdjRow> build_adjacency(const Graph& g) {
  std::vector<AdjRow> adj(static_cast<std::size_t>(g.node_count()));
  for (const auto& e : g.edges) {
    Rat w(e.w);
    w.canonicalize();
    if (w <= 0) throw input_error("exact: nonpositive conductance");
    adj[static_cast<std::size_t>(e.u)][e.v] += w;
    adj[static_cast<std::size_t>(e.v)][e.u] += w;
  }
  return adj;
}

struct Step {
  std::int32_t node;
  std::vector<std::pair<std::int32_t, Rat>> nbrs;
  Rat degree;
  Rat rhs;
};

// Eliminates `node`: records its equation and redistributes conductance and
// right-hand side among its neighbors (star-mesh transform).
Step eliminate(std::vector<AdjRow>& adj, std::vector<Rat>& rhs, std::int32_t node) {
  AdjRow& row = adj[static_cast<std::size_t>(node)];
  Step st;
  st.node = node;
  st.nbrs.assign(row.begin(), row.end());
  st.rhs = rhs[static_cast<std::size_t>(node)];
  st.degree = 0;
  for (const auto& [j, c] : st.nbrs) st.degree += c;
  if (st.degree == 0) throw solver_error("exact: isolated free node (singular system)");

  for (std::size_t a = 0; a < st.nbrs.size(); ++a) {
    const auto& [ja, ca] = st.nbrs[a];
    rhs[static_cast<std::size_t>(ja)] += ca / st.degree * st.rhs;
    adj[static_cast<std::size_t>(ja)].erase(node);
    for (std::size_t b = a + 1; b < st.nbrs.size(); ++b) {
      const auto& [jb, cb] = st.nbrs[b];
      Rat t = ca * cb / st.degree;
      adj[static_cast<std::size_t>(ja)][jb] += t;
      adj[static_cast<std::size_t>(jb)][ja] += t;
    }
  }
  row.clear();
  return st;
}

// Repeatedly removes the free node of minimal current degree.
std::vector<Step> eliminate_all(std::vector<AdjRow>& adj, std::vector<Rat>& rhs,
                                const std::vector<char>& keep, bool skip_isolated = false) {
  const std::int32_t n = static_cast<std::int32_t>(adj.size());
  using Entry = std::pair<std::size_t, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::int32_t i = 0; i < n; ++i) {
    if (!keep[static_cast<std::size_t>(i)]) heap.push({adj[static_cast<std::size_t>(i)].size(), i});
  }
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<Step> steps;
  while (!heap.empty()) {
    auto [deg, i] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(i)]) continue;
    if (deg != adj[static_cast<std::size_t>(i)].size()) {
      heap.push({adj[static_cast<std::size_t>(i)].size(), i});
      continue;
    }
    done[static_cast<std::size_t>(i)] = 1;
    if (skip_isolated && adj[static_cast<std::size_t>(i)].empty()) continue;
    steps.push_back(eliminate(adj, rhs, i));
    for (const auto& [j, c] : steps.back().nbrs) {
      if (!keep[static_cast<std::size_t>(j)] && !done[static_cast<std::size_t>(j)])
        heap.push({adj[static_cast<std::size_t>(j)].size(), j});
    }
  }
  return steps;
}

}  // namespace

std::vector<Rat> exact_solve(const Graph& g, const std::vector<ExactPin>& pins,
                             const std::vector<ExactPin>& source, int node_cap) {
  const std::int32_t n = g.node_count();
  if (n > node_cap) throw capacity_error("exact_solve: node cap exceeded");
  if (pins.empty()) throw input_error("exact_solve: no pinned nodes");

  std::vector<char> pinned(static_cast<std::size_t>(n), 0);
  std::vector<Rat> u(static_cast<std::size_t>(n), Rat(0));
  for (const auto& p : pins) {
    if (p.node < 0 || p.node >= n) throw input_error("exact_solve: pin index out of range");
    if (pinned[static_cast<std::size_t>(p.node)]) throw input_error("exact_solve: duplicate pin");
    pinned[static_cast<std::size_t>(p.node)] = 1;
    u[static_cast<std::size_t>(p.node)] = p.value;
  }

  auto adj = build_adjacency(g);
  std::vector<Rat> rhs(static_cast<std::size_t>(n), Rat(0));
  for (const auto& s : source) {
    if (s.node < 0 || s.node >= n) throw input_error("exact_solve: source index out of range");
    rhs[static_cast<std::size_t>(s.node)] = s.value;
  }

  const auto steps = eliminate_all(adj, rhs, pinned);

  // Back-substitution: at elimination time every recorded neighbor is either
  // pinned or eliminated later, so reverse order resolves all of them first.
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    Rat acc = it->rhs;
    for (const auto& [j, c] : it->nbrs) acc += c * u[static_cast<std::size_t>(j)];
    u[static_cast<std::size_t>(it->node)] = acc / it->degree;
  }
  return u;
}

Rat exact_energy(const Graph& g, std::span<const Rat> u) {
  if (static_cast<std::int64_t>(u.size()) != g.node_count())
    throw input_error("exact_energy: dimension mismatch");
  Rat acc(0);
  for (const auto& e : g.edges) {
    Rat w(e.w);
    w.canonicalize();
    Rat d = u[static_cast<std::size_t>(e.u)] - u[static_cast<std::size_t>(e.v)];
    acc += w * d * d;
  }
  return acc;
}

Rat exact_resistance(const Graph& g, std::span<const std::int32_t> A,
                     std::span<const std::int32_t> B, int node_cap) {
  const std::int32_t n = g.node_count();
  if (n > node_cap) throw capacity_error("exact_resistance: node cap exceeded");
  if (A.empty() || B.empty()) throw input_error("exact_resistance: empty terminal set");

  std::vector<int> side(static_cast<std::size_t>(n), 0);
  for (auto a : A) side.at(static_cast<std::size_t>(a)) = 1;
  for (auto b : B) {
    if (side.at(static_cast<std::size_t>(b)) == 1)
      throw input_error("exact_resistance: terminal sets intersect");
    side[static_cast<std::size_t>(b)] = 2;
  }

  // short each terminal set onto its first node
  const std::int32_t ra = A[0], rb = B[0];
  auto rep = [&](std::int32_t v) { return side[static_cast<std::size_t>(v)] == 1   ? ra
                                          : side[static_cast<std::size_t>(v)] == 2 ? rb
                                                                                   : v; };
  std::vector<AdjRow> adj(static_cast<std::size_t>(n));
  for (const auto& e : g.edges) {
    const std::int32_t u = rep(e.u), v = rep(e.v);
    if (u == v) continue;
    Rat w(e.w);
    w.canonicalize();
    adj[static_cast<std::size_t>(u)][v] += w;
    adj[static_cast<std::size_t>(v)][u] += w;
  }

  std::vector<char> keep(static_cast<std::size_t>(n), 1);
  for (std::int32_t i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = (rep(i) != i) || i == ra || i == rb;
  std::vector<Rat> rhs(static_cast<std::size_t>(n), Rat(0));
  eliminate_all(adj, rhs, keep, /*skip_isolated=*/true);

  auto it = adj[static_cast<std::size_t>(ra)].find(rb);
  if (it == adj[static_cast<std::size_t>(ra)].end() || it->second == 0)
    throw solver_error("exact_resistance: terminals not connected");
  return Rat(1) / it->second;
}

}  // namespace carpetlab
