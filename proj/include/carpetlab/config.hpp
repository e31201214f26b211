#pragma once

#include <cstdint>
#include <string>

#include "carpetlab/solver.hpp"

namespace carpetlab {

// Runtime configuration. Precedence: command line > config file > defaults.
struct Config {
  int max_level = 6;
  double tol = 1e-10;
  double iter_cap_mult = 50.0;
  int threads = 1;
  double rho_override = 0.0;  // 0 means "use the fitted estimate"
  std::uint64_t seed = 20177;
  std::string out_dir = "out";
  std::string number_kind = "auto";  // exact | float | auto
  std::string format = "json";       // json | csv
  int rational_cap_level = 8;
  int exact_node_cap = 2000;
  int quad_depth_cap = 5;
  int avg_depth_offset = 4;

  SolveOptions solve_options() const {
    SolveOptions o;
    o.tol = tol;
    o.iter_cap_mult = iter_cap_mult;
    o.threads = threads;
    return o;
  }
};

// Flat key=value file; '#' starts a comment.
Config load_config_file(const std::string& path, Config base = {});
void apply_config_entry(Config& cfg, const std::string& key, const std::string& value);

// FNV-1a over the canonical key=value rendering; pinned into every report.
std::uint64_t config_hash(const Config& cfg);
std::string config_canonical(const Config& cfg);

}  // namespace carpetlab
