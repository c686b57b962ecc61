#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gblab/families.hpp"
#include "gblab/graph.hpp"
#include "gblab/parabolicity.hpp"

namespace gblab {

/// Graph file format:
/// { "vertices": [{"id": <label>, "c": <w>} ...],
///   "edges":    [{"u": <label>, "v": <label>, "r": <w>} ...],
///   "frontier": [<label> ...] }
/// Labels may be arbitrary integers; they are mapped onto dense indices in
/// order of appearance. The loader enforces the same invariants as
/// build_graph and reports offending fields in ParseError messages.
WeightedGraph graph_from_json(const nlohmann::json& j);
WeightedGraph load_graph_json(const std::string& path);
nlohmann::json graph_to_json(const WeightedGraph& g);
void save_graph_json(const WeightedGraph& g, const std::string& path);

nlohmann::json cochain_to_json(const Cochain0& f);
nlohmann::json cochain_to_json(const Cochain1& phi);
Cochain0 cochain0_from_json(const WeightedGraph& g, const nlohmann::json& j);
Cochain1 cochain1_from_json(const WeightedGraph& g, const nlohmann::json& j);

/// Fixed, versioned CSV for probe sweeps. Byte-identical across runs with the
/// same configuration: the wall_ms column is pinned to 0 here and real
/// timings are carried by the JSON report instead.
std::string probe_csv(const std::vector<ProbeReport>& reports);

/// Full JSON report: per-radius rows with diagnostics, timings and witness
/// cochains.
nlohmann::json probe_json(const std::vector<ProbeReport>& reports);

/// Batch experiment description; parsed from a JSON config file, overridable
/// by CLI flags.
struct ExperimentConfig {
    FamilySpec family;
    std::string probe = "nonparabolicity";  // nonparabolicity | capacity | kernel
    std::vector<Index> radii = {3, 4, 5, 6};
    Index k_radius = 0;
    std::string u_rule = "boundary";  // boundary | boundary_edge | boundary_vertex
    Index buffer = -1;                // -1: half the truncation radius
    double pass_threshold = 1e-3;
    double tol = 1e-12;
    std::string convention = "full";  // full | punctured
    std::string out;
    Index threads = 0;  // 0: resolve from GBLAB_THREADS, then 1
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// "A..B" or "a,b,c" into an increasing list.
std::vector<Index> parse_radii(const std::string& text);

UPlacement u_rule_from_string(const std::string& name);
NormConvention convention_from_string(const std::string& name);

}  // namespace gblab
