#include "gblab/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gblab {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double want_positive_number(const nlohmann::json& j, const char* field, const char* where) {
    if (!j.contains(field) || !j[field].is_number())
        throw ParseError(std::string(where) + ": numeric field '" + field + "' is required");
    return j[field].get<double>();
}

}  // namespace

WeightedGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph file needs 'vertices' and 'edges' arrays");
    if (!j["vertices"].is_array() || j["vertices"].empty())
        throw ParseError("graph file has no vertices");

    std::vector<double> c;
    std::vector<std::int64_t> labels;
    std::map<std::int64_t, Index> index_of;
    for (const auto& v : j["vertices"]) {
        if (!v.contains("id") || !v["id"].is_number_integer())
            throw ParseError("vertex entry needs an integer 'id'");
        const std::int64_t id = v["id"].get<std::int64_t>();
        if (index_of.count(id)) throw ParseError("duplicate vertex id " + std::to_string(id));
        index_of[id] = static_cast<Index>(labels.size());
        labels.push_back(id);
        c.push_back(want_positive_number(v, "c", "vertex"));
    }

    auto dense = [&](const nlohmann::json& jid, const char* field) {
        if (!jid.is_number_integer())
            throw ParseError(std::string("edge field '") + field + "' must be an integer vertex id");
        const std::int64_t id = jid.get<std::int64_t>();
        auto it = index_of.find(id);
        if (it == index_of.end())
            throw ParseError("edge references unknown vertex id " + std::to_string(id));
        return it->second;
    };

    std::vector<EdgeSpec> edges;
    for (const auto& e : j["edges"]) {
        if (!e.contains("u") || !e.contains("v"))
            throw ParseError("edge entry needs 'u' and 'v'");
        edges.push_back({dense(e["u"], "u"), dense(e["v"], "v"),
                         want_positive_number(e, "r", "edge")});
    }

    std::vector<Index> frontier;
    if (j.contains("frontier"))
        for (const auto& f : j["frontier"]) frontier.push_back(dense(f, "frontier"));

    return build_graph(std::move(c), edges, VertexSet(std::move(frontier)), std::move(labels));
}

WeightedGraph load_graph_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("graph file '" + path + "': " + e.what());
    }
    return graph_from_json(j);
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (Index x = 0; x < g.vertex_count(); ++x)
        j["vertices"].push_back({{"id", g.label(x)}, {"c", g.vertex_weight(x)}});
    j["edges"] = nlohmann::json::array();
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        j["edges"].push_back({{"u", g.label(oe.tail)}, {"v", g.label(oe.head)}, {"r", g.edge_weight(e)}});
    }
    j["frontier"] = nlohmann::json::array();
    for (Index f : g.frontier()) j["frontier"].push_back(g.label(f));
    return j;
}

void save_graph_json(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write graph file '" + path + "'");
    out << graph_to_json(g).dump(2) << "\n";
}

nlohmann::json cochain_to_json(const Cochain0& f) {
    nlohmann::json j;
    j["kind"] = "cochain0";
    j["values"] = std::vector<double>(f.values.data(), f.values.data() + f.values.size());
    return j;
}

nlohmann::json cochain_to_json(const Cochain1& phi) {
    nlohmann::json j;
    j["kind"] = "cochain1";
    j["values"] = std::vector<double>(phi.values.data(), phi.values.data() + phi.values.size());
    return j;
}

Cochain0 cochain0_from_json(const WeightedGraph& g, const nlohmann::json& j) {
    if (j.value("kind", "") != "cochain0") throw ParseError("expected a cochain0 object");
    const auto vals = j.at("values").get<std::vector<double>>();
    if (static_cast<Index>(vals.size()) != g.vertex_count())
        throw ParseError("cochain0 length does not match the graph");
    Cochain0 f = Cochain0::zero(g);
    for (Index x = 0; x < g.vertex_count(); ++x) f.values(x) = vals[static_cast<std::size_t>(x)];
    return f;
}

Cochain1 cochain1_from_json(const WeightedGraph& g, const nlohmann::json& j) {
    if (j.value("kind", "") != "cochain1") throw ParseError("expected a cochain1 object");
    const auto vals = j.at("values").get<std::vector<double>>();
    if (static_cast<Index>(vals.size()) != g.edge_count())
        throw ParseError("cochain1 length does not match the graph");
    Cochain1 phi = Cochain1::zero(g);
    for (Index e = 0; e < g.edge_count(); ++e) phi.values(e) = vals[static_cast<std::size_t>(e)];
    return phi;
}

std::string probe_csv(const std::vector<ProbeReport>& reports) {
    std::ostringstream out;
    out << "# gblab probe csv v1\n";
    out << "# wall_ms is fixed to 0 for reproducible output; timings are in the json report\n";
    out << "family,radius,M,C,kernel_dim,slope,verdict,wall_ms\n";
    for (const ProbeReport& r : reports) {
        out << r.family << ',' << r.radius << ',' << r.depth_margin << ',' << fmt(r.constant)
            << ',' << r.kernel_dim << ',' << fmt(r.slope) << ',' << r.verdict << ",0\n";
    }
    return out.str();
}

nlohmann::json probe_json(const std::vector<ProbeReport>& reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ProbeReport& r : reports) {
        nlohmann::json row;
        row["family"] = r.family;
        row["radius"] = r.radius;
        row["M"] = r.depth_margin;
        row["C"] = r.constant;
        row["kernel_dim"] = r.kernel_dim;
        row["slope"] = r.slope;
        row["verdict"] = r.verdict;
        row["wall_ms"] = r.wall_ms;
        row["K"] = r.k_desc;
        row["U"] = r.u_desc;
        row["norm_convention"] = r.diag.norm_convention;
        row["exact_kernel"] = r.diag.exact_kernel;
        row["used_pseudo_inverse"] = r.diag.used_pseudo_inverse;
        row["witness_f"] = cochain_to_json(r.witness.f);
        row["witness_phi"] = cochain_to_json(r.witness.phi);
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"report", "gblab probe v1"}, {"rows", std::move(rows)}};
}

std::vector<Index> parse_radii(const std::string& text) {
    std::vector<Index> out;
    const auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            const Index a = std::stoll(text.substr(0, dots));
            const Index b = std::stoll(text.substr(dots + 2));
            if (b < a) throw ParseError("radii range '" + text + "' is decreasing");
            for (Index r = a; r <= b; ++r) out.push_back(r);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
        }
    } catch (const std::logic_error&) {
        throw ParseError("cannot parse radii '" + text + "'");
    }
    if (out.empty()) throw ParseError("radii list '" + text + "' is empty");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw ParseError("radii must be strictly increasing");
    return out;
}

UPlacement u_rule_from_string(const std::string& name) {
    if (name == "boundary") return UPlacement::BoundaryVertexEdge;
    if (name == "boundary_edge") return UPlacement::BoundaryEdge;
    if (name == "boundary_vertex") return UPlacement::BoundaryVertex;
    throw ParseError("unknown u_rule '" + name + "'");
}

NormConvention convention_from_string(const std::string& name) {
    if (name == "full") return NormConvention::FullGraph;
    if (name == "punctured") return NormConvention::PuncturedGraph;
    throw ParseError("unknown norm convention '" + name + "'");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw ParseError("config root must be an object");
    if (j.contains("family")) {
        const auto& f = j["family"];
        if (f.is_string()) {
            cfg.family.family = f.get<std::string>();
        } else if (f.is_object()) {
            cfg.family.family = f.value("name", cfg.family.family);
            cfg.family.radius = f.value("radius", cfg.family.radius);
            cfg.family.branching = f.value("branching", cfg.family.branching);
            cfg.family.rays = f.value("rays", cfg.family.rays);
            cfg.family.weight_scheme = f.value("weights", cfg.family.weight_scheme);
            cfg.family.graph_file = f.value("graph_file", cfg.family.graph_file);
        } else {
            throw ParseError("config field 'family' must be a string or object");
        }
    }
    if (j.contains("radii")) {
        if (j["radii"].is_string()) cfg.radii = parse_radii(j["radii"].get<std::string>());
        else cfg.radii = j["radii"].get<std::vector<Index>>();
    }
    cfg.probe = j.value("probe", cfg.probe);
    cfg.k_radius = j.value("k_radius", cfg.k_radius);
    cfg.u_rule = j.value("u_rule", cfg.u_rule);
    cfg.buffer = j.value("buffer", cfg.buffer);
    cfg.pass_threshold = j.value("pass_threshold", cfg.pass_threshold);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.convention = j.value("convention", cfg.convention);
    cfg.out = j.value("out", cfg.out);
    cfg.threads = j.value("threads", cfg.threads);
    if (cfg.tol <= 0.0) throw ParseError("config field 'tol' must be positive");
    u_rule_from_string(cfg.u_rule);
    convention_from_string(cfg.convention);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config file '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

}  // namespace gblab
