#pragma once

#include <json.hpp>

#include <string>

#include "qgk/graph.hpp"
#include "qgk/mre.hpp"
#include "qgk/terms.hpp"

namespace qgk {

/// Graph file format:
///   {"vertices": ["a","b"],
///    "edges": [{"id":"e1","ends":["a","b"],"length":"1.5"}]}
/// Lengths are finite decimal strings (exact rational conversion).
GraphSpec graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const GraphSpec& spec);
QuantumGraph load_graph_file(const std::string& path);

/// Term sums serialize as arrays of
///   {"kind":"LOG|EVEN|ODD","c":"p/q","d":"p/q","s0":"p/q"}
/// with an extra "pi" field carrying the symbolic pi power when nonzero.
nlohmann::json termsum_to_json(const TermSum& sum);
TermSum termsum_from_json(const nlohmann::json& j);

/// Per-order density dump: mu keyed by vertex id, nu listed per edge end.
nlohmann::json densities_to_json(const DensitySeries& series);

}  // namespace qgk
