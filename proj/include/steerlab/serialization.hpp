#pragma once

// JSON documents for graphs and witness specs. Parties and vertices are
// 1-based in documents.
//
// Graph:  {"n": 4, "d": 2, "edges": [[1, 2], [2, 3]], "colors": [[1, 3], [2, 4]]}
//         "colors" may be omitted, in which case a greedy coloring is used.
// Spec:   {"dims": [2, 2], "terms": [{"settings": [2, 1],
//          "constraints": [{"participants": [[1, 2], [2, 1]], "modulus": 2, "target": 0}]}]}
//         A setting is an id or {"id": 2, "basis": [[[re, im], ...], ...]} (rows of the basis matrix).

#include <filesystem>
#include <string>
#include <string_view>

#include "steerlab/graph_states.hpp"
#include "steerlab/witness_kernel.hpp"

namespace steerlab {

/// Throws ValidationError on malformed documents, unknown keys and improper colorings.
ColoredGraph parse_graph(std::string_view text);
std::string dump_graph(const ColoredGraph& graph);
ColoredGraph load_graph_file(const std::filesystem::path& path);

WitnessSpec parse_spec(std::string_view text);
/// Doubles are written with round-trip precision, so parse_spec(dump_spec(s)) reproduces s exactly.
std::string dump_spec(const WitnessSpec& spec);

/// Whole file as a string; ValidationError if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

} // namespace steerlab
