#include "carpetlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "carpetlab/errors.hpp"

namespace carpetlab {

Json provenance(const Config& cfg) {
  char stamp[64];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  Json j;
  j["artifact_version"] = kVersion;
  j["config_hash"] = hash;
  j["max_level"] = cfg.max_level;
  j["rational_cap_level"] = cfg.rational_cap_level;
  j["exact_node_cap"] = cfg.exact_node_cap;
  j["seed"] = cfg.seed;
  j["generated_at"] = stamp;  // excluded from byte-identity
  return j;
}

Json to_json(const SeriesReport& s) {
  Json j;
  j["quantity"] = s.quantity;
  j["levels"] = s.levels;
  j["values"] = s.values;
  return j;
}

Json to_json(const RhoEstimate& e) {
  Json j;
  j["rho_hat"] = e.rho_hat;
  j["beta_star_hat"] = e.beta_star_hat;
  j["ratios"] = e.ratios;
  j["in_hard_bounds"] = e.in_hard_bounds;
  j["in_soft_window"] = e.in_soft_window;
  j["dropped_levels"] = e.dropped;
  return j;
}

Json to_json(const MultiplicativityReport& m) {
  Json j;
  j["C_hat"] = m.C_hat;
  j["C_by_prefix"] = m.C_by_prefix;
  j["stable"] = m.stable;
  return j;
}

Json to_json(const RatioReport& r) {
  Json j;
  j["claim"] = r.claim;
  j["labels"] = r.labels;
  j["ratios"] = r.ratios;
  j["max_ratio"] = r.max_ratio;
  j["min_ratio"] = r.min_ratio;
  j["drift"] = r.drift;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const HarnackReport& h) {
  Json j;
  j["levels"] = h.levels;
  j["C_H"] = h.C_H;
  j["stability"] = h.stability;
  j["stable"] = h.stable;
  j["detail"] = to_json(h.detail);
  return j;
}

Json to_json(const VinftyScaling& v) {
  Json j;
  j["radii"] = v.radii;
  j["R"] = v.R;
  j["g_zz"] = v.gzz;
  j["gamma_R"] = v.gamma_R;
  j["gamma_g"] = v.gamma_g;
  j["distortion_max"] = v.distortion_max;
  return j;
}

Json to_json(const QuadratureReport& q) {
  Json j;
  j["levels"] = q.levels;
  j["depth"] = q.depth;
  j["raw"] = q.raw;
  j["weighted"] = q.weighted;
  j["partial_sum"] = q.partial_sum;
  return j;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << body;
}

void write_json_file(const std::string& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string series_csv(const SeriesReport& s) {
  std::ostringstream os;
  os << "level,value\n";
  char buf[64];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", s.levels[i], s.values[i]);
    os << buf;
  }
  return os.str();
}

std::string ratios_csv(const RatioReport& r) {
  std::ostringstream os;
  os << "label,ratio\n";
  char buf[64];
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%.17g\n", r.ratios[i]);
    os << '"' << r.labels[i] << '"' << buf;
  }
  return os.str();
}

namespace {

std::string weight_str(double w) {
  if (w == std::floor(w) && std::abs(w) < 1e15) {
    return std::to_string(static_cast<long long>(w));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

std::string graph_export(const Graph& g, bool with_nodes) {
  Json hdr;
  hdr["format"] = "carpetlab-graph";
  hdr["kind"] = g.kind == GraphKind::vertex ? "vertex" : g.kind == GraphKind::cell ? "cell" : "ball";
  hdr["mode"] = mode_name(g.mode);
  hdr["level"] = g.level;
  hdr["scale_den"] = g.scale_den;
  hdr["nodes"] = g.node_count();
  hdr["edges"] = g.edges.size();
  hdr["with_nodes"] = with_nodes;

  std::ostringstream os;
  os << hdr.dump() << "\n" << g.node_count() << "\n";
  if (with_nodes) {
    for (const auto& p : g.points) os << p.x << " " << p.y << "\n";
  }
  for (const auto& e : g.edges) os << e.u << " " << e.v << " " << weight_str(e.w) << "\n";
  return os.str();
}

void write_graph(const std::string& path, const Graph& g, bool with_nodes) {
  write_text(path, graph_export(g, with_nodes));
}

}  // namespace carpetlab
