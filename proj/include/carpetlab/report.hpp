#pragma once

#include <json.hpp>

#include <string>

#include "carpetlab/config.hpp"
#include "carpetlab/energy.hpp"
#include "carpetlab/resistance.hpp"
#include "carpetlab/verify.hpp"

namespace carpetlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Reproducibility block appended to every report. The timestamp is the one
// field excluded from the byte-identity guarantee.
Json provenance(const Config& cfg);

Json to_json(const SeriesReport& s);
Json to_json(const RhoEstimate& e);
Json to_json(const MultiplicativityReport& m);
Json to_json(const RatioReport& r);
Json to_json(const HarnackReport& h);
Json to_json(const VinftyScaling& v);
Json to_json(const QuadratureReport& q);

void write_text(const std::string& path, const std::string& body);
void write_json_file(const std::string& path, const Json& j);

std::string series_csv(const SeriesReport& s);
std::string ratios_csv(const RatioReport& r);

// Line-oriented graph export: one JSON header line, the node count, then
// "i j weight" per edge; optionally "x y" node lines first.
std::string graph_export(const Graph& g, bool with_nodes = false);
void write_graph(const std::string& path, const Graph& g, bool with_nodes = false);

}  // namespace carpetlab
