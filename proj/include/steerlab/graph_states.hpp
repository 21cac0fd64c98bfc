#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "steerlab/tensor_core.hpp"

namespace steerlab {

/// Unordered vertex pair, 0-based, stored with a < b.
struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    bool operator==(const Edge&) const = default;
};

/// A graph on n qudits of uniform dimension d with a caller-supplied partition
/// of the vertices into color classes. Vertices are 0-based here; documents and
/// CLI output use 1-based labels.
///
/// Construction validates the structure (no self-loops, no duplicate edges, the
/// classes partition the vertex set, no empty class) but not properness of the
/// coloring, which validate_coloring() reports.
class ColoredGraph {
public:
    ColoredGraph(std::size_t n_vertices, int d, std::vector<Edge> edges,
                 std::vector<std::vector<std::size_t>> colors);

    std::size_t n_vertices() const { return n_; }
    int d() const { return d_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<std::size_t>>& colors() const { return colors_; }
    std::size_t q() const { return colors_.size(); }

    /// Graph neighbors of v, ascending.
    std::vector<std::size_t> neighbors(std::size_t v) const;
    std::size_t color_of(std::size_t v) const { return color_of_.at(v); }

private:
    std::size_t n_;
    int d_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> colors_;
    std::vector<std::size_t> color_of_;
};

/// Edges whose endpoints share a color class; empty iff the coloring is proper.
std::vector<Edge> validate_coloring(const ColoredGraph& graph);

/// Throws ValidationError listing the violating edges.
void require_proper_coloring(const ColoredGraph& graph);

/// Greedy coloring in vertex order (smallest free color first). Only used when
/// the caller supplies no coloring.
std::vector<std::vector<std::size_t>> greedy_coloring(std::size_t n_vertices, const std::vector<Edge>& edges);

/// U = sum_v |v><v| (x) Z^v on a (d, d) register; diagonal with entries omega^{vk}.
LinearOperator edge_unitary(int d);

/// |G> = prod_{(i,j) in E} U_(i,j) (x)_k F|0>_k.
StateVector build_graph_state(const ColoredGraph& graph);

enum class PresetKind { chain, star, box4, horseshoe4, two_vertex, g4_prime };

struct Preset {
    PresetKind kind;
    std::string name;
    ColoredGraph graph;
    StateVector state;
};

/// Path 1-2-...-n, colored by vertex parity.
Preset chain(std::size_t n, int d);
/// Vertex 1 joined to every other vertex; classes {1} and {2..n}.
Preset star(std::size_t n, int d);
/// Cycle 1-2-3-4-1 with classes {1,3} and {2,4}.
Preset box4(int d);
/// The four-vertex chain under its one-way computing name.
Preset horseshoe4(int d);
/// A single edge.
Preset two_vertex(int d);
/// The photonic four-qubit state (|0000> + |0011> + |1100> - |1111>)/2, built from
/// its amplitudes. Its graph is the d = 2 chain; the state equals
/// (H_1 (x) 1 (x) 1 (x) H_4) applied to the chain graph state.
Preset g4_prime();

/// Dispatch by name: chain, star, box4, horseshoe4, two_vertex, g4_prime.
/// `n` is ignored by fixed-size presets.
Preset make_preset(std::string_view name, std::size_t n, int d);
std::string preset_name(PresetKind kind);

} // namespace steerlab
