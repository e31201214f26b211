#include "carpetlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "carpetlab/errors.hpp"

namespace carpetlab {

void apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "max_level") cfg.max_level = std::stoi(value);
    else if (key == "tol") cfg.tol = std::stod(value);
    else if (key == "iter_cap_mult") cfg.iter_cap_mult = std::stod(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "rho_override") cfg.rho_override = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "number_kind") cfg.number_kind = value;
    else if (key == "format") cfg.format = value;
    else if (key == "rational_cap_level") cfg.rational_cap_level = std::stoi(value);
    else if (key == "exact_node_cap") cfg.exact_node_cap = std::stoi(value);
    else if (key == "quad_depth_cap") cfg.quad_depth_cap = std::stoi(value);
    else if (key == "avg_depth_offset") cfg.avg_depth_offset = std::stoi(value);
    else throw input_error("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw input_error("bad value for config key " + key + ": " + value);
  }
  if (cfg.tol <= 0) throw input_error("config: tol must be positive");
  if (cfg.threads < 1) throw input_error("config: threads must be >= 1");
}

Config load_config_file(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) apply_config_entry(base, key, value);
  }
  return base;
}

std::string config_canonical(const Config& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "avg_depth_offset=%d\nexact_node_cap=%d\nformat=%s\niter_cap_mult=%.17g\n"
                "max_level=%d\nnumber_kind=%s\nquad_depth_cap=%d\nrational_cap_level=%d\n"
                "rho_override=%.17g\nseed=%llu\nthreads=%d\ntol=%.17g\n",
                c.avg_depth_offset, c.exact_node_cap, c.format.c_str(), c.iter_cap_mult,
                c.max_level, c.number_kind.c_str(), c.quad_depth_cap, c.rational_cap_level,
                c.rho_override, static_cast<unsigned long long>(c.seed), c.threads, c.tol);
  return buf;
}

std::uint64_t config_hash(const Config& cfg) {
  const std::string s = config_canonical(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace carpetlab
