#include "steerlab/serialization.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace steerlab {

namespace {

using nlohmann::json;

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ValidationError(where + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
}

const json& field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(where + ": missing key '" + key + "'");
    }
    return *it;
}

long long as_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw ValidationError(where + " must be an integer");
    }
    return v.get<long long>();
}

std::size_t as_label(const json& v, std::size_t count, const std::string& where) {
    const long long x = as_integer(v, where);
    if (x < 1 || static_cast<std::size_t>(x) > count) {
        throw ValidationError(where + " must lie in 1.." + std::to_string(count));
    }
    return static_cast<std::size_t>(x - 1);
}

int as_dimension(const json& v, const std::string& where) {
    const long long x = as_integer(v, where);
    if (x < 2 || x > 1'000'000) {
        throw ValidationError(where + " must be an integer >= 2");
    }
    return static_cast<int>(x);
}

const json& as_array(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ValidationError(where + " must be an array");
    }
    return v;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError(where + " must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

json setting_to_json(const LocalSetting& s) {
    if (!s.basis) {
        return s.id;
    }
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.basis->rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < s.basis->cols(); ++j) {
            row.push_back(complex_to_json((*s.basis)(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return {{"id", s.id}, {"basis", std::move(rows)}};
}

LocalSetting setting_from_json(const json& v, int d, const std::string& where) {
    LocalSetting s;
    if (v.is_number_integer()) {
        s.id = static_cast<int>(v.get<long long>());
        return s;
    }
    require_keys(v, {"id", "basis"}, where);
    s.id = static_cast<int>(as_integer(field(v, "id", where), where + ".id"));
    if (v.contains("basis")) {
        const json& rows = as_array(v["basis"], where + ".basis");
        if (rows.size() != static_cast<std::size_t>(d)) {
            throw ValidationError(where + ".basis must have " + std::to_string(d) + " rows");
        }
        Matrix b(d, d);
        for (int i = 0; i < d; ++i) {
            const json& row = as_array(rows[static_cast<std::size_t>(i)], where + ".basis row");
            if (row.size() != static_cast<std::size_t>(d)) {
                throw ValidationError(where + ".basis must be square");
            }
            for (int j = 0; j < d; ++j) {
                b(i, j) = complex_from_json(row[static_cast<std::size_t>(j)], where + ".basis entry");
            }
        }
        s.basis = std::move(b);
    }
    return s;
}

} // namespace

ColoredGraph parse_graph(std::string_view text) {
    const json doc = parse_document(text);
    const std::string where = "graph";
    require_keys(doc, {"n", "d", "edges", "colors"}, where);
    const long long n_raw = as_integer(field(doc, "n", where), "graph.n");
    if (n_raw < 1) {
        throw ValidationError("graph.n must be >= 1");
    }
    const auto n = static_cast<std::size_t>(n_raw);
    const int d = as_dimension(field(doc, "d", where), "graph.d");
    std::vector<Edge> edges;
    for (const json& e : as_array(field(doc, "edges", where), "graph.edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw ValidationError("graph.edges entries must be [u, v]");
        }
        edges.push_back({as_label(e[0], n, "edge endpoint"), as_label(e[1], n, "edge endpoint")});
    }
    std::vector<std::vector<std::size_t>> colors;
    if (doc.contains("colors")) {
        for (const json& cls : as_array(doc["colors"], "graph.colors")) {
            std::vector<std::size_t> members;
            for (const json& v : as_array(cls, "color class")) {
                members.push_back(as_label(v, n, "color class member"));
            }
            colors.push_back(std::move(members));
        }
    } else {
        colors = greedy_coloring(n, edges);
    }
    ColoredGraph graph(n, d, std::move(edges), std::move(colors));
    require_proper_coloring(graph);
    return graph;
}

std::string dump_graph(const ColoredGraph& graph) {
    json edges = json::array();
    for (const Edge& e : graph.edges()) {
        edges.push_back({e.a + 1, e.b + 1});
    }
    json colors = json::array();
    for (const auto& cls : graph.colors()) {
        json members = json::array();
        for (std::size_t v : cls) {
            members.push_back(v + 1);
        }
        colors.push_back(std::move(members));
    }
    json doc = {{"n", graph.n_vertices()}, {"d", graph.d()}, {"edges", std::move(edges)}, {"colors", std::move(colors)}};
    return doc.dump();
}

ColoredGraph load_graph_file(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

WitnessSpec parse_spec(std::string_view text) {
    const json doc = parse_document(text);
    require_keys(doc, {"dims", "terms"}, "spec");
    std::vector<int> dims;
    for (const json& d : as_array(field(doc, "dims", "spec"), "spec.dims")) {
        dims.push_back(as_dimension(d, "spec.dims entry"));
    }
    if (dims.empty()) {
        throw ValidationError("spec.dims must not be empty");
    }
    const QuditRegister reg(dims);
    std::vector<WitnessTerm> terms;
    for (const json& t : as_array(field(doc, "terms", "spec"), "spec.terms")) {
        const std::string where = "term " + std::to_string(terms.size() + 1);
        require_keys(t, {"settings", "constraints"}, where);
        WitnessTerm term;
        const json& settings = as_array(field(t, "settings", where), where + ".settings");
        if (settings.size() != dims.size()) {
            throw ValidationError(where + ": one setting per party is required");
        }
        for (std::size_t k = 0; k < settings.size(); ++k) {
            term.settings.push_back(setting_from_json(settings[k], dims[k], where + ".settings"));
        }
        for (const json& c : as_array(field(t, "constraints", where), where + ".constraints")) {
            require_keys(c, {"participants", "modulus", "target"}, where + " constraint");
            Constraint constraint;
            for (const json& p : as_array(field(c, "participants", where), where + " participants")) {
                if (!p.is_array() || p.size() != 2) {
                    throw ValidationError(where + ": participants must be [party, setting] pairs");
                }
                constraint.participants.push_back(
                    {as_label(p[0], dims.size(), "participant party"), static_cast<int>(as_integer(p[1], "participant setting"))});
            }
            const long long modulus = as_integer(field(c, "modulus", where), "constraint modulus");
            if (modulus < 2 || modulus > 1'000'000) {
                throw ValidationError(where + ": constraint modulus must be >= 2");
            }
            constraint.modulus = static_cast<int>(modulus);
            constraint.target = c.contains("target") ? static_cast<int>(as_integer(c["target"], "constraint target") % modulus) : 0;
            term.constraints.push_back(std::move(constraint));
        }
        terms.push_back(std::move(term));
    }
    return {reg, std::move(terms)};
}

std::string dump_spec(const WitnessSpec& spec) {
    json dims = json::array();
    for (int d : spec.reg().dims()) {
        dims.push_back(d);
    }
    json terms = json::array();
    for (const WitnessTerm& term : spec.terms()) {
        json settings = json::array();
        for (const LocalSetting& s : term.settings) {
            settings.push_back(setting_to_json(s));
        }
        json constraints = json::array();
        for (const Constraint& c : term.constraints) {
            json participants = json::array();
            for (const Participant& p : c.participants) {
                participants.push_back({p.party + 1, p.setting});
            }
            constraints.push_back({{"participants", std::move(participants)}, {"modulus", c.modulus}, {"target", c.target}});
        }
        terms.push_back({{"settings", std::move(settings)}, {"constraints", std::move(constraints)}});
    }
    return json{{"dims", std::move(dims)}, {"terms", std::move(terms)}}.dump();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read '" + path.string() + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace steerlab
