#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "carpetlab/report.hpp"

using namespace carpetlab;

TEST_CASE("config entries and file loading") {
  Config cfg;
  apply_config_entry(cfg, "max_level", "5");
  apply_config_entry(cfg, "tol", "1e-8");
  apply_config_entry(cfg, "seed", "99");
  CHECK(cfg.max_level == 5);
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.seed == 99);
  CHECK_THROWS_AS(apply_config_entry(cfg, "nope", "1"), input_error);
  CHECK_THROWS_AS(apply_config_entry(cfg, "tol", "-1"), input_error);

  const char* path = "/tmp/carpetlab_test.cfg";
  {
    std::ofstream out(path);
    out << "# comment\nmax_level = 4\n seed=7 # trailing\n\n";
  }
  const Config loaded = load_config_file(path);
  CHECK(loaded.max_level == 4);
  CHECK(loaded.seed == 7);
  std::remove(path);
}

TEST_CASE("config hash is stable and sensitive") {
  Config a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 12345;
  CHECK(config_hash(a) != config_hash(b));
  Config c;
  c.out_dir = "elsewhere";  // output location does not change results
  CHECK(config_hash(a) == config_hash(c));
}

TEST_CASE("graph export format") {
  const Graph g = cell_graph(1);
  const std::string dump = graph_export(g);
  CHECK(dump == graph_export(g));  // deterministic
  // header line, node count line, one line per edge
  std::size_t lines = 0;
  for (char ch : dump)
    if (ch == '\n') ++lines;
  CHECK(lines == 2 + g.edges.size());
  CHECK(dump.find("\"carpetlab-graph\"") != std::string::npos);
  CHECK(dump.find("\"mode\":\"sc\"") != std::string::npos);
  CHECK(dump.find("\n8\n") != std::string::npos);
  // integer weights are printed without a decimal point
  CHECK(dump.find("0 1 1\n") != std::string::npos);

  const std::string with_nodes = graph_export(g, true);
  std::size_t lines2 = 0;
  for (char ch : with_nodes)
    if (ch == '\n') ++lines2;
  CHECK(lines2 == 2 + static_cast<std::size_t>(g.node_count()) + g.edges.size());
}

TEST_CASE("json serialization is deterministic") {
  SeriesReport s;
  s.quantity = "R_n^V";
  s.levels = {1, 2};
  s.values = {1.1818181818181819, 1.4576058785288887};
  const auto j1 = to_json(s).dump(2);
  const auto j2 = to_json(s).dump(2);
  CHECK(j1 == j2);
  CHECK(series_csv(s).find("1,1.1818181818181819") != std::string::npos);
}
