#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qgk/rational.hpp"

namespace qgk {

/// Raw graph description as read from a graph file, before validation.
struct GraphSpec {
  struct EdgeSpec {
    std::string id;
    std::array<std::string, 2> ends;  // {initial, terminal}
    std::string length;               // finite decimal string
  };
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
};

/// One end of an edge: end 0 sits at the initial vertex (x_e = 0),
/// end 1 at the terminal vertex (x_e = L_e). Loops occupy both ends
/// of the same vertex.
struct EdgeEnd {
  int edge = -1;
  int end = 0;
  int key() const { return edge * 2 + end; }
  bool operator==(const EdgeEnd& o) const { return edge == o.edge && end == o.end; }
};

/// A strictly interior point of an edge, coordinate measured from the
/// edge's initial vertex.
struct EdgePoint {
  std::string edge;
  Rational x;
};

/// Immutable finite metric graph with exact rational edge lengths.
/// Loops and parallel edges are representable; the degree of a vertex
/// counts a loop twice.
class QuantumGraph {
 public:
  struct Edge {
    std::string id;
    int v_init;
    int v_term;
    Rational length;
    bool is_loop() const { return v_init == v_term; }
  };

  static QuantumGraph build(const GraphSpec& spec);  // throws GraphError

  size_t vertex_count() const { return vertex_ids_.size(); }
  size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int index) const { return edges_[static_cast<size_t>(index)]; }

  int vertex_index(const std::string& id) const;  // throws GraphError if unknown
  int edge_index(const std::string& id) const;

  int degree(int vertex) const {
    return static_cast<int>(incidence_[static_cast<size_t>(vertex)].size());
  }
  const std::vector<EdgeEnd>& incident(int vertex) const {
    return incidence_[static_cast<size_t>(vertex)];
  }
  int end_vertex(const EdgeEnd& ee) const {
    const Edge& e = edge(ee.edge);
    return ee.end == 0 ? e.v_init : e.v_term;
  }
  EdgeEnd other_end(const EdgeEnd& ee) const { return {ee.edge, 1 - ee.end}; }

  GraphSpec to_spec() const;

 private:
  QuantumGraph() = default;
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vertex_lookup_;
  std::map<std::string, int> edge_lookup_;
  std::vector<std::vector<EdgeEnd>> incidence_;
};

/// Invariant report on a raw spec; empty means valid. Never throws.
std::vector<std::string> validate(const GraphSpec& spec);
std::vector<std::string> validate(const QuantumGraph& graph);

/// Validates and constructs; throws GraphError naming every violation.
QuantumGraph build_graph(const GraphSpec& spec);

/// Checks that the point lies strictly inside an edge of g (throws GraphError)
/// and returns its exact distance to each end of that edge, ordered
/// [initial, terminal]. A loop reports its vertex twice.
std::vector<std::pair<std::string, Rational>> locate(const QuantumGraph& g,
                                                     const EdgePoint& p);

/// Distance from the given edge end to an interior point of that edge.
Rational end_distance(const QuantumGraph& g, const EdgeEnd& ee, const EdgePoint& p);

}  // namespace qgk
