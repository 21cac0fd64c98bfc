#include "steerlab/graph_states.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace steerlab {

ColoredGraph::ColoredGraph(std::size_t n_vertices, int d, std::vector<Edge> edges,
                           std::vector<std::vector<std::size_t>> colors)
    : n_(n_vertices), d_(d), edges_(std::move(edges)), colors_(std::move(colors)) {
    if (n_ == 0) {
        throw ValidationError("graph needs at least one vertex");
    }
    if (d_ < 2) {
        throw ValidationError("graph dimension d must be >= 2");
    }
    for (Edge& e : edges_) {
        if (e.a >= n_ || e.b >= n_) {
            throw ValidationError("edge references a vertex outside 1.." + std::to_string(n_));
        }
        if (e.a == e.b) {
            throw ValidationError("self-loop at vertex " + std::to_string(e.a + 1));
        }
        if (e.a > e.b) {
            std::swap(e.a, e.b);
        }
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        for (std::size_t j = i + 1; j < edges_.size(); ++j) {
            if (edges_[i] == edges_[j]) {
                throw ValidationError("duplicate edge (" + std::to_string(edges_[i].a + 1) + "," +
                                      std::to_string(edges_[i].b + 1) + ")");
            }
        }
    }

    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    color_of_.assign(n_, unassigned);
    for (std::size_t m = 0; m < colors_.size(); ++m) {
        if (colors_[m].empty()) {
            throw ValidationError("color class " + std::to_string(m + 1) + " is empty");
        }
        std::sort(colors_[m].begin(), colors_[m].end());
        for (std::size_t v : colors_[m]) {
            if (v >= n_) {
                throw ValidationError("color class references vertex outside 1.." + std::to_string(n_));
            }
            if (color_of_[v] != unassigned) {
                throw ValidationError("vertex " + std::to_string(v + 1) + " appears in more than one color class");
            }
            color_of_[v] = m;
        }
    }
    for (std::size_t v = 0; v < n_; ++v) {
        if (color_of_[v] == unassigned) {
            throw ValidationError("vertex " + std::to_string(v + 1) + " has no color class");
        }
    }
}

std::vector<std::size_t> ColoredGraph::neighbors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (const Edge& e : edges_) {
        if (e.a == v) {
            out.push_back(e.b);
        } else if (e.b == v) {
            out.push_back(e.a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> validate_coloring(const ColoredGraph& graph) {
    std::vector<Edge> bad;
    for (const Edge& e : graph.edges()) {
        if (graph.color_of(e.a) == graph.color_of(e.b)) {
            bad.push_back(e);
        }
    }
    return bad;
}

void require_proper_coloring(const ColoredGraph& graph) {
    const std::vector<Edge> bad = validate_coloring(graph);
    if (bad.empty()) {
        return;
    }
    std::string msg = "improper coloring; edges inside one class:";
    for (const Edge& e : bad) {
        msg += " (" + std::to_string(e.a + 1) + "," + std::to_string(e.b + 1) + ")";
    }
    throw ValidationError(msg);
}

std::vector<std::vector<std::size_t>> greedy_coloring(std::size_t n_vertices, const std::vector<Edge>& edges) {
    std::vector<std::size_t> color(n_vertices, 0);
    std::size_t used = 0;
    for (std::size_t v = 0; v < n_vertices; ++v) {
        std::vector<bool> taken(used + 1, false);
        for (const Edge& e : edges) {
            std::size_t other = n_vertices;
            if (e.a == v && e.b < v) {
                other = e.b;
            } else if (e.b == v && e.a < v) {
                other = e.a;
            }
            if (other < n_vertices) {
                taken[color[other]] = true;
            }
        }
        std::size_t c = 0;
        while (taken[c]) {
            ++c;
        }
        color[v] = c;
        used = std::max(used, c + 1);
    }
    std::vector<std::vector<std::size_t>> classes(used);
    for (std::size_t v = 0; v < n_vertices; ++v) {
        classes[color[v]].push_back(v);
    }
    return classes;
}

LinearOperator edge_unitary(int d) {
    const LinearOperator z = z_generalized(d);
    const QuditRegister reg({d, d});
    Matrix u = Matrix::Zero(d * d, d * d);
    for (int v = 0; v < d; ++v) {
        for (int k = 0; k < d; ++k) {
            // (Z^v)_{kk} = omega^{vk}, read off Z's diagonal at vk mod d.
            const auto vk = static_cast<std::size_t>((v * k) % d);
            u(v * d + k, v * d + k) = z(vk, vk);
        }
    }
    return {reg, std::move(u)};
}

StateVector build_graph_state(const ColoredGraph& graph) {
    const QuditRegister reg = QuditRegister::uniform(graph.n_vertices(), graph.d());
    const double amp = 1.0 / std::sqrt(static_cast<double>(reg.total_dim()));
    // (x)_k F|0> is the uniform superposition.
    StateVector state(reg, Vector::Constant(static_cast<Eigen::Index>(reg.total_dim()), Complex(amp, 0.0)));
    const LinearOperator u = edge_unitary(graph.d());
    for (const Edge& e : graph.edges()) {
        const std::array<std::size_t, 2> targets{e.a, e.b};
        state = apply_local(u, targets, state);
    }
    return state.normalized();
}

namespace {

Preset finish(PresetKind kind, ColoredGraph graph) {
    StateVector state = build_graph_state(graph);
    return Preset{kind, preset_name(kind), std::move(graph), std::move(state)};
}

void require_parties(std::size_t n, std::size_t min, std::string_view what) {
    if (n < min) {
        throw ValidationError(std::string(what) + " needs n >= " + std::to_string(min));
    }
}

} // namespace

std::string preset_name(PresetKind kind) {
    switch (kind) {
    case PresetKind::chain:
        return "chain";
    case PresetKind::star:
        return "star";
    case PresetKind::box4:
        return "box4";
    case PresetKind::horseshoe4:
        return "horseshoe4";
    case PresetKind::two_vertex:
        return "two_vertex";
    case PresetKind::g4_prime:
        return "g4_prime";
    }
    return "unknown";
}

Preset chain(std::size_t n, int d) {
    require_parties(n, 2, "chain");
    std::vector<Edge> edges;
    for (std::size_t v = 0; v + 1 < n; ++v) {
        edges.push_back({v, v + 1});
    }
    std::vector<std::vector<std::size_t>> colors(2);
    for (std::size_t v = 0; v < n; ++v) {
        colors[v % 2].push_back(v);
    }
    return finish(PresetKind::chain, ColoredGraph(n, d, std::move(edges), std::move(colors)));
}

Preset star(std::size_t n, int d) {
    require_parties(n, 2, "star");
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> colors{{0}, {}};
    for (std::size_t v = 1; v < n; ++v) {
        edges.push_back({0, v});
        colors[1].push_back(v);
    }
    return finish(PresetKind::star, ColoredGraph(n, d, std::move(edges), std::move(colors)));
}

Preset box4(int d) {
    std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    return finish(PresetKind::box4, ColoredGraph(4, d, std::move(edges), {{0, 2}, {1, 3}}));
}

Preset horseshoe4(int d) {
    Preset p = chain(4, d);
    p.kind = PresetKind::horseshoe4;
    p.name = preset_name(PresetKind::horseshoe4);
    return p;
}

Preset two_vertex(int d) {
    return finish(PresetKind::two_vertex, ColoredGraph(2, d, {{0, 1}}, {{0}, {1}}));
}

Preset g4_prime() {
    const QuditRegister reg = QuditRegister::uniform(4, 2);
    // Qubits 1,2 carry the H/V polarization of photons A,B; qubits 3,4 their R/L path.
    Vector amps = Vector::Zero(16);
    amps(reg.index(std::array{0, 0, 0, 0})) = 0.5;
    amps(reg.index(std::array{1, 1, 0, 0})) = 0.5;
    amps(reg.index(std::array{0, 0, 1, 1})) = 0.5;
    amps(reg.index(std::array{1, 1, 1, 1})) = -0.5;
    ColoredGraph graph = chain(4, 2).graph;
    return Preset{PresetKind::g4_prime, preset_name(PresetKind::g4_prime), std::move(graph),
                  StateVector(reg, std::move(amps))};
}

Preset make_preset(std::string_view name, std::size_t n, int d) {
    if (name == "chain") {
        return chain(n, d);
    }
    if (name == "star") {
        return star(n, d);
    }
    if (name == "box4") {
        return box4(d);
    }
    if (name == "horseshoe4") {
        return horseshoe4(d);
    }
    if (name == "two_vertex") {
        return two_vertex(d);
    }
    if (name == "g4_prime") {
        if (d != 2) {
            throw ValidationError("g4_prime is a qubit (d = 2) state");
        }
        return g4_prime();
    }
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

} // namespace steerlab
