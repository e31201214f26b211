#include "carpetlab/energy.hpp"

#include <algorithm>

namespace carpetlab {

SeriesSums series_E(std::span<const double> D, double beta) {
  SeriesSums s;
  const double t = beta * std::log(3.0) - std::log(8.0);
  double run = 0;
  for (std::size_t i = 0; i < D.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double term = std::exp(t * n) * D[i];
    run += term;
    s.terms.push_back(term);
    s.partial.push_back(run);
  }
  for (std::size_t i = 0; i + 1 < s.terms.size(); ++i) {
    s.tail_ratio.push_back(s.terms[i] > 0 ? s.terms[i + 1] / s.terms[i] : 0.0);
  }
  return s;
}

std::vector<Rat> series_E_exact(std::span<const Rat> D, const Rat& weight3ba) {
  std::vector<Rat> partial;
  Rat run(0), w(1);
  for (const auto& d : D) {
    w *= weight3ba;
    run += w * d;
    partial.push_back(run);
  }
  return partial;
}

double sup_form(std::span<const double> D, double beta) {
  const double t = beta * std::log(3.0) - std::log(8.0);
  double best = 0;
  for (std::size_t i = 0; i < D.size(); ++i) {
    best = std::max(best, std::exp(t * (static_cast<int>(i) + 1)) * D[i]);
  }
  return best;
}

Rat sup_form_exact(std::span<const Rat> D, const Rat& weight3ba) {
  Rat best(0), w(1);
  for (const auto& d : D) {
    w *= weight3ba;
    Rat term = w * d;
    if (term > best) best = term;
  }
  return best;
}

QuadratureReport besov_quadrature(const Field<double>& u, double beta, int N, int m,
                                  int depth_cap) {
  if (N < 0) throw input_error("besov_quadrature: negative level count");
  if (m < N) throw input_error("besov_quadrature: depth must be >= annulus levels");
  if (m > depth_cap) throw capacity_error("besov_quadrature: depth exceeds cap");

  const std::int64_t den = ipow3(m);
  const std::uint64_t P = word_count(m, Mode::sc);
  std::vector<std::int32_t> xs(P), ys(P);
  std::vector<double> val(P);
  {
    std::vector<std::int64_t> cols(static_cast<std::size_t>(m) + 1, 0);
    std::vector<std::int64_t> rows(static_cast<std::size_t>(m) + 1, 0);
    std::uint64_t leaf = 0;
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == m) {
        xs[leaf] = static_cast<std::int32_t>(cols[static_cast<std::size_t>(depth)]);
        ys[leaf] = static_cast<std::int32_t>(rows[static_cast<std::size_t>(depth)]);
        val[leaf] = u(cols[static_cast<std::size_t>(depth)], rows[static_cast<std::size_t>(depth)], den);
        ++leaf;
        return;
      }
      for (int d = 0; d < 8; ++d) {
        cols[static_cast<std::size_t>(depth) + 1] = cols[static_cast<std::size_t>(depth)] * 3 + kOffX[d];
        rows[static_cast<std::size_t>(depth) + 1] = rows[static_cast<std::size_t>(depth)] * 3 + kOffY[d];
        self(self, depth + 1);
      }
    };
    rec(rec, 0);
  }

  // thr[k] = (3^{m-k})^2; a pair belongs to annulus k iff dist^2 < thr[k]
  std::vector<std::int64_t> thr(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    const std::int64_t t = ipow3(m - k);
    thr[static_cast<std::size_t>(k)] = t * t;
  }

  std::vector<double> bucket(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::uint64_t i = 0; i < P; ++i) {
    const std::int32_t xi = xs[i], yi = ys[i];
    const double vi = val[i];
    for (std::uint64_t j = i + 1; j < P; ++j) {
      const std::int64_t dx = xi - xs[j], dy = yi - ys[j];
      const std::int64_t d2 = dx * dx + dy * dy;
      if (d2 >= thr[0]) continue;
      int k = N;
      while (d2 >= thr[static_cast<std::size_t>(k)]) --k;
      const double dv = vi - val[j];
      bucket[static_cast<std::size_t>(k)] += 2.0 * dv * dv;
    }
  }

  const double inv_meas = 1.0 / (static_cast<double>(P) * static_cast<double>(P));
  QuadratureReport rep;
  rep.levels = N;
  rep.depth = m;
  rep.raw.assign(static_cast<std::size_t>(N) + 1, 0.0);
  double suffix = 0;
  for (int k = N; k >= 0; --k) {
    suffix += bucket[static_cast<std::size_t>(k)];
    rep.raw[static_cast<std::size_t>(k)] = suffix * inv_meas;
  }
  const double t = (alpha_dim() + beta) * std::log(3.0);
  for (int k = 0; k <= N; ++k) {
    const double w = std::exp(t * k);
    rep.weighted.push_back(w * rep.raw[static_cast<std::size_t>(k)]);
    rep.partial_sum += rep.weighted.back();
  }
  return rep;
}

std::vector<double> restrict_vertex_function(const Graph& fine, std::span<const double> u,
                                             const Graph& coarse) {
  if (fine.kind != GraphKind::vertex || coarse.kind != GraphKind::vertex ||
      fine.mode != coarse.mode || fine.level < coarse.level)
    throw input_error("restrict_vertex_function: incompatible graphs");
  const std::int64_t f = ipow3(fine.level - coarse.level);
  std::vector<double> out(static_cast<std::size_t>(coarse.node_count()));
  for (std::int32_t i = 0; i < coarse.node_count(); ++i) {
    const GridPoint p = coarse.points[static_cast<std::size_t>(i)];
    const std::int32_t j = fine.find_node({p.x * f, p.y * f});
    if (j < 0) throw input_error("restrict_vertex_function: vertex not nested");
    out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace carpetlab
