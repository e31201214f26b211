#include "carpetlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <thread>

#include "carpetlab/errors.hpp"

namespace carpetlab {

namespace {

struct Csr {
  std::vector<std::int64_t> off;
  std::vector<std::int32_t> col;
  std::vector<double> w;
  std::vector<double> deg;  // weighted degree (Laplacian diagonal)
};

Csr build_csr(const Graph& g) {
  const std::int32_t n = g.node_count();
  Csr m;
  m.off.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : g.edges) {
    ++m.off[static_cast<std::size_t>(e.u) + 1];
    ++m.off[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t i = 1; i < m.off.size(); ++i) m.off[i] += m.off[i - 1];
  m.col.resize(static_cast<std::size_t>(m.off.back()));
  m.w.resize(static_cast<std::size_t>(m.off.back()));
  std::vector<std::int64_t> cur(m.off.begin(), m.off.end() - 1);
  for (const auto& e : g.edges) {
    m.col[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.u)])] = e.v;
    m.w[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.u)]++)] = e.w;
    m.col[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.v)])] = e.u;
    m.w[static_cast<std::size_t>(cur[static_cast<std::size_t>(e.v)]++)] = e.w;
  }
  m.deg.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int32_t i = 0; i < n; ++i) {
    for (std::int64_t k = m.off[static_cast<std::size_t>(i)]; k < m.off[static_cast<std::size_t>(i) + 1]; ++k)
      m.deg[static_cast<std::size_t>(i)] += m.w[static_cast<std::size_t>(k)];
  }
  return m;
}

// y = L_ff x on the free-node subsystem, rows split across threads.
struct FreeSystem {
  const Csr* full = nullptr;
  std::vector<std::int32_t> free_nodes;      // free index -> node
  std::vector<std::int32_t> free_of_node;    // node -> free index or -1
  std::vector<double> diag;

  void apply(std::span<const double> x, std::span<double> y, int threads) const {
    const std::size_t nf = free_nodes.size();
    auto rows = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const std::int32_t node = free_nodes[i];
        double acc = diag[i] * x[i];
        for (std::int64_t k = full->off[static_cast<std::size_t>(node)];
             k < full->off[static_cast<std::size_t>(node) + 1]; ++k) {
          const std::int32_t j = full->col[static_cast<std::size_t>(k)];
          const std::int32_t fj = free_of_node[static_cast<std::size_t>(j)];
          if (fj >= 0) acc -= full->w[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(fj)];
        }
        y[i] = acc;
      }
    };
    if (threads <= 1 || nf < 4096) {
      rows(0, nf);
      return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (nf + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = static_cast<std::size_t>(t) * chunk;
      if (lo >= nf) break;
      pool.emplace_back(rows, lo, std::min(nf, lo + chunk));
    }
    for (auto& th : pool) th.join();
  }
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double graph_energy(const Graph& g, std::span<const double> u) {
  if (static_cast<std::int64_t>(u.size()) != g.node_count())
    throw input_error("graph_energy: dimension mismatch");
  double acc = 0;
  for (const auto& e : g.edges) {
    const double d = u[static_cast<std::size_t>(e.u)] - u[static_cast<std::size_t>(e.v)];
    acc += e.w * d * d;
  }
  return acc;
}

SolveReport solve_dirichlet(const Graph& g, const BoundarySpec& bc, const SolveOptions& opt,
                            const std::vector<double>* source) {
  const std::int32_t n = g.node_count();
  if (bc.nodes.size() != bc.values.size()) throw input_error("solve_dirichlet: boundary spec shape");
  if (bc.nodes.empty()) throw input_error("solve_dirichlet: empty boundary");
  std::vector<char> pinned(static_cast<std::size_t>(n), 0);
  for (auto i : bc.nodes) {
    if (i < 0 || i >= n) throw input_error("solve_dirichlet: boundary index out of range");
    if (pinned[static_cast<std::size_t>(i)]) throw input_error("solve_dirichlet: duplicate pin");
    pinned[static_cast<std::size_t>(i)] = 1;
  }

  const Csr full = build_csr(g);

  // every free node must reach a pinned node
  {
    std::vector<char> seen = pinned;
    std::queue<std::int32_t> q;
    for (auto i : bc.nodes) q.push(i);
    while (!q.empty()) {
      const std::int32_t u = q.front();
      q.pop();
      for (std::int64_t k = full.off[static_cast<std::size_t>(u)]; k < full.off[static_cast<std::size_t>(u) + 1]; ++k) {
        const std::int32_t v = full.col[static_cast<std::size_t>(k)];
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          q.push(v);
        }
      }
    }
    for (std::int32_t i = 0; i < n; ++i) {
      if (!seen[static_cast<std::size_t>(i)])
        throw solver_error("solve_dirichlet: free component with no boundary node");
    }
  }

  SolveReport rep;
  rep.u.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = 0; k < bc.nodes.size(); ++k)
    rep.u[static_cast<std::size_t>(bc.nodes[k])] = bc.values[k];

  FreeSystem sys;
  sys.full = &full;
  sys.free_of_node.assign(static_cast<std::size_t>(n), -1);
  for (std::int32_t i = 0; i < n; ++i) {
    if (!pinned[static_cast<std::size_t>(i)]) {
      sys.free_of_node[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(sys.free_nodes.size());
      sys.free_nodes.push_back(i);
    }
  }
  const std::size_t nf = sys.free_nodes.size();

  if (nf > 0) {
    sys.diag.resize(nf);
    std::vector<double> b(nf, 0.0);
    for (std::size_t i = 0; i < nf; ++i) {
      const std::int32_t node = sys.free_nodes[i];
      sys.diag[i] = full.deg[static_cast<std::size_t>(node)];
      if (sys.diag[i] <= 0) throw solver_error("solve_dirichlet: isolated free node");
      double acc = source ? (*source)[static_cast<std::size_t>(node)] : 0.0;
      for (std::int64_t k = full.off[static_cast<std::size_t>(node)]; k < full.off[static_cast<std::size_t>(node) + 1]; ++k) {
        const std::int32_t j = full.col[static_cast<std::size_t>(k)];
        if (pinned[static_cast<std::size_t>(j)])
          acc += full.w[static_cast<std::size_t>(k)] * rep.u[static_cast<std::size_t>(j)];
      }
      b[i] = acc;
    }

    std::vector<double> x(nf, 0.0);
    if (opt.warm_start) {
      if (opt.warm_start->size() != static_cast<std::size_t>(n))
        throw input_error("solve_dirichlet: warm start size mismatch");
      for (std::size_t i = 0; i < nf; ++i)
        x[i] = (*opt.warm_start)[static_cast<std::size_t>(sys.free_nodes[i])];
    }

    const double bnorm2 = [&] {
      double s = 0;
      for (std::size_t i = 0; i < nf; ++i) s += b[i] * b[i] / sys.diag[i];
      return s;
    }();

    if (bnorm2 == 0.0) {
      std::fill(x.begin(), x.end(), 0.0);
    } else {
      const int cap = static_cast<int>(opt.iter_cap_mult * std::sqrt(static_cast<double>(nf))) + 16;
      std::vector<double> r(nf), z(nf), p(nf), q(nf);
      sys.apply(x, r, opt.threads);
      for (std::size_t i = 0; i < nf; ++i) r[i] = b[i] - r[i];
      for (std::size_t i = 0; i < nf; ++i) z[i] = r[i] / sys.diag[i];
      p = z;
      double rz = dot(r, z);
      double rel = std::sqrt(std::max(0.0, rz) / bnorm2);
      int it = 0;
      while (rel > opt.tol && it < cap && rz > 0) {
        sys.apply(p, q, opt.threads);
        const double pq = dot(p, q);
        if (pq <= 0) break;
        const double a = rz / pq;
        for (std::size_t i = 0; i < nf; ++i) x[i] += a * p[i];
        for (std::size_t i = 0; i < nf; ++i) r[i] -= a * q[i];
        for (std::size_t i = 0; i < nf; ++i) z[i] = r[i] / sys.diag[i];
        const double rz2 = dot(r, z);
        const double beta = rz2 / rz;
        rz = rz2;
        for (std::size_t i = 0; i < nf; ++i) p[i] = z[i] + beta * p[i];
        rel = std::sqrt(std::max(0.0, rz) / bnorm2);
        ++it;
      }
      rep.iterations = it;
      rep.residual = rel;
      if (rel > opt.tol) {
        throw solver_error("solve_dirichlet: no convergence, relative residual " +
                           std::to_string(rel) + " after " + std::to_string(it) + " iterations");
      }
    }

    for (std::size_t i = 0; i < nf; ++i) rep.u[static_cast<std::size_t>(sys.free_nodes[i])] = x[i];

    // harmonicity defect per free node, relative to its degree
    double worst = 0;
    for (std::size_t i = 0; i < nf; ++i) {
      const std::int32_t node = sys.free_nodes[i];
      double acc = sys.diag[i] * x[i];
      for (std::int64_t k = full.off[static_cast<std::size_t>(node)]; k < full.off[static_cast<std::size_t>(node) + 1]; ++k)
        acc -= full.w[static_cast<std::size_t>(k)] * rep.u[static_cast<std::size_t>(full.col[static_cast<std::size_t>(k)])];
      if (source) acc -= (*source)[static_cast<std::size_t>(node)];
      worst = std::max(worst, std::abs(acc) / sys.diag[i]);
    }
    rep.residual_inf = worst;
  }

  rep.energy = graph_energy(g, rep.u);

  if (!source) {
    double lo = bc.values[0], hi = bc.values[0];
    for (double v : bc.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double excess = 0;
    for (double v : rep.u) excess = std::max({excess, lo - v, v - hi});
    rep.max_principle_excess = excess;
  }
  return rep;
}

double effective_resistance(const Graph& g, std::span<const std::int32_t> A,
                            std::span<const std::int32_t> B, const SolveOptions& opt,
                            SolveReport* report) {
  if (A.empty() || B.empty()) throw input_error("effective_resistance: empty terminal set");
  BoundarySpec bc;
  for (auto a : A) {
    bc.nodes.push_back(a);
    bc.values.push_back(0.0);
  }
  for (auto b : B) {
    bc.nodes.push_back(b);
    bc.values.push_back(1.0);
  }
  SolveReport rep = solve_dirichlet(g, bc, opt);
  if (rep.energy <= 0) throw solver_error("effective_resistance: vanishing energy");
  const double R = 1.0 / rep.energy;
  if (report) *report = std::move(rep);
  return R;
}

SolveReport green_function(const Graph& ball, std::int32_t center, const SolveOptions& opt) {
  if (ball.kind != GraphKind::ball) throw input_error("green_function: needs a ball graph");
  if (center < 0 || center >= ball.node_count()) throw input_error("green_function: bad center");
  if (ball.boundary.empty()) throw input_error("green_function: ball has no boundary ring");
  if (ball.boundary[static_cast<std::size_t>(center)])
    throw input_error("green_function: center lies on the boundary");
  BoundarySpec bc;
  for (std::int32_t i = 0; i < ball.node_count(); ++i) {
    if (ball.boundary[static_cast<std::size_t>(i)]) {
      bc.nodes.push_back(i);
      bc.values.push_back(0.0);
    }
  }
  if (bc.nodes.empty()) throw input_error("green_function: empty boundary");
  std::vector<double> source(static_cast<std::size_t>(ball.node_count()), 0.0);
  source[static_cast<std::size_t>(center)] = 1.0;
  return solve_dirichlet(ball, bc, opt, &source);
}

Graph short_nodes(const Graph& g, const std::vector<std::vector<std::int32_t>>& groups,
                  std::vector<std::int32_t>* node_map) {
  const std::int32_t n = g.node_count();
  std::vector<std::int32_t> rep(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) rep[static_cast<std::size_t>(i)] = i;
  for (const auto& grp : groups) {
    if (grp.empty()) continue;
    for (auto v : grp) {
      if (v < 0 || v >= n) throw input_error("short_nodes: index out of range");
      if (rep[static_cast<std::size_t>(v)] != v && rep[static_cast<std::size_t>(v)] != grp[0])
        throw input_error("short_nodes: overlapping groups");
      rep[static_cast<std::size_t>(v)] = grp[0];
    }
  }
  std::vector<std::int32_t> newid(static_cast<std::size_t>(n), -1);
  Graph out;
  out.kind = g.kind;
  out.mode = g.mode;
  out.level = g.level;
  out.scale_den = g.scale_den;
  for (std::int32_t i = 0; i < n; ++i) {
    if (rep[static_cast<std::size_t>(i)] == i) {
      newid[static_cast<std::size_t>(i)] = out.node_count();
      out.points.push_back(g.points[static_cast<std::size_t>(i)]);
      if (!g.boundary.empty()) out.boundary.push_back(g.boundary[static_cast<std::size_t>(i)]);
    }
  }
  for (const auto& e : g.edges) {
    const std::int32_t u = newid[static_cast<std::size_t>(rep[static_cast<std::size_t>(e.u)])];
    const std::int32_t v = newid[static_cast<std::size_t>(rep[static_cast<std::size_t>(e.v)])];
    if (u == v) continue;
    out.edges.push_back({std::min(u, v), std::max(u, v), e.w});
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::vector<Edge> merged;
  for (const auto& e : out.edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().w += e.w;
    else
      merged.push_back(e);
  }
  out.edges = std::move(merged);
  if (node_map) {
    node_map->assign(static_cast<std::size_t>(n), -1);
    for (std::int32_t i = 0; i < n; ++i)
      (*node_map)[static_cast<std::size_t>(i)] = newid[static_cast<std::size_t>(rep[static_cast<std::size_t>(i)])];
  }
  return out;
}

Graph cut_edges(const Graph& g, std::span<const std::size_t> edge_ids) {
  std::vector<char> drop(g.edges.size(), 0);
  for (auto id : edge_ids) {
    if (id >= g.edges.size()) throw input_error("cut_edges: edge index out of range");
    drop[id] = 1;
  }
  Graph out = g;
  out.edges.clear();
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (!drop[i]) out.edges.push_back(g.edges[i]);
  }
  return out;
}

std::vector<double> prolong_vertex_function(const Graph& coarse, std::span<const double> u,
                                            const Graph& fine) {
  if (coarse.kind != GraphKind::vertex || fine.kind != GraphKind::vertex ||
      fine.level <= coarse.level)
    throw input_error("prolong_vertex_function: incompatible graphs");
  const int dl = fine.level - coarse.level;
  const std::int64_t f = ipow3(dl);
  const std::int64_t side = ipow3(coarse.level);
  std::vector<double> out(static_cast<std::size_t>(fine.node_count()), 0.0);
  for (std::int32_t i = 0; i < fine.node_count(); ++i) {
    const GridPoint p = fine.points[static_cast<std::size_t>(i)];
    // candidate containing coarse cells around the floor cell
    std::int64_t cx = std::min(p.x / (2 * f), side - 1);
    std::int64_t cy = std::min(p.y / (2 * f), side - 1);
    std::int64_t bx = cx, by = cy;
    bool found = false;
    for (std::int64_t ax : {cx, cx - 1}) {
      for (std::int64_t ay : {cy, cy - 1}) {
        if (ax < 0 || ay < 0 || found) continue;
        // the cell must contain the point and be a carpet cell
        if (p.x >= 2 * f * ax && p.x <= 2 * f * (ax + 1) && p.y >= 2 * f * ay &&
            p.y <= 2 * f * (ay + 1) && valid_origin(ax, ay)) {
          bx = ax;
          by = ay;
          found = true;
        }
      }
    }
    if (!found) throw input_error("prolong_vertex_function: no containing cell");
    // bilinear interpolation from the four coarse corners of the cell
    const std::int64_t x0 = 2 * bx, y0 = 2 * by;
    const double h = 2.0 * static_cast<double>(f);
    const double tx = static_cast<double>(p.x - x0 * f) / h;
    const double ty = static_cast<double>(p.y - y0 * f) / h;
    const GridPoint corner[4] = {{x0, y0}, {x0 + 2, y0}, {x0, y0 + 2}, {x0 + 2, y0 + 2}};
    const double wgt[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    double acc = 0;
    for (int c = 0; c < 4; ++c) {
      const std::int32_t j = coarse.find_node(corner[c]);
      if (j < 0) throw input_error("prolong_vertex_function: missing cell corner");
      acc += wgt[c] * u[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace carpetlab
