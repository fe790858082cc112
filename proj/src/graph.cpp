#include "qgk/graph.hpp"

#include <algorithm>
#include <set>

#include "qgk/errors.hpp"

namespace qgk {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> validate(const GraphSpec& spec) {
  std::vector<std::string> violations;
  if (spec.vertices.empty()) violations.push_back("graph has no vertices");

  std::set<std::string> vertex_ids;
  for (const auto& v : spec.vertices) {
    if (!vertex_ids.insert(v).second)
      violations.push_back("duplicate vertex id '" + v + "'");
  }

  std::set<std::string> edge_ids;
  for (const auto& e : spec.edges) {
    if (!edge_ids.insert(e.id).second)
      violations.push_back("duplicate edge id '" + e.id + "'");
    for (const auto& end : e.ends) {
      if (!vertex_ids.count(end))
        violations.push_back("edge '" + e.id + "' references unknown vertex '" +
                             end + "'");
    }
    try {
      Rational length = parse_decimal(e.length);
      if (length <= 0)
        violations.push_back("edge '" + e.id + "' has nonpositive length " +
                             e.length);
    } catch (const Error&) {
      violations.push_back("edge '" + e.id + "' has unparsable length '" +
                           e.length + "'");
    }
  }

  // Degree >= 1 and connectivity, on whatever part of the spec is sound.
  std::map<std::string, int> index;
  for (const auto& v : spec.vertices)
    if (!index.count(v)) index[v] = static_cast<int>(index.size());
  std::vector<std::vector<int>> adj(index.size());
  std::vector<int> degree(index.size(), 0);
  for (const auto& e : spec.edges) {
    if (!index.count(e.ends[0]) || !index.count(e.ends[1])) continue;
    int a = index[e.ends[0]], b = index[e.ends[1]];
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
    degree[static_cast<size_t>(a)]++;
    degree[static_cast<size_t>(b)]++;
  }
  for (const auto& [id, i] : index)
    if (degree[static_cast<size_t>(i)] == 0 && !spec.vertices.empty())
      violations.push_back("vertex '" + id + "' has degree 0");
  if (!index.empty()) {
    std::vector<bool> seen(index.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<size_t>(v)])
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          stack.push_back(w);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      violations.push_back("graph is disconnected");
  }
  return violations;
}

std::vector<std::string> validate(const QuantumGraph& graph) {
  return validate(graph.to_spec());
}

QuantumGraph QuantumGraph::build(const GraphSpec& spec) {
  auto violations = validate(spec);
  if (!violations.empty())
    throw GraphError("invalid graph: " + join(violations, "; "));

  QuantumGraph g;
  g.vertex_ids_ = spec.vertices;
  for (size_t i = 0; i < g.vertex_ids_.size(); ++i)
    g.vertex_lookup_[g.vertex_ids_[i]] = static_cast<int>(i);
  g.incidence_.resize(g.vertex_ids_.size());
  for (const auto& e : spec.edges) {
    Edge edge;
    edge.id = e.id;
    edge.v_init = g.vertex_lookup_.at(e.ends[0]);
    edge.v_term = g.vertex_lookup_.at(e.ends[1]);
    edge.length = parse_decimal(e.length);
    int idx = static_cast<int>(g.edges_.size());
    g.edge_lookup_[e.id] = idx;
    g.incidence_[static_cast<size_t>(edge.v_init)].push_back({idx, 0});
    g.incidence_[static_cast<size_t>(edge.v_term)].push_back({idx, 1});
    g.edges_.push_back(std::move(edge));
  }
  return g;
}

QuantumGraph build_graph(const GraphSpec& spec) { return QuantumGraph::build(spec); }

int QuantumGraph::vertex_index(const std::string& id) const {
  auto it = vertex_lookup_.find(id);
  if (it == vertex_lookup_.end()) throw GraphError("unknown vertex '" + id + "'");
  return it->second;
}

int QuantumGraph::edge_index(const std::string& id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) throw GraphError("unknown edge '" + id + "'");
  return it->second;
}

GraphSpec QuantumGraph::to_spec() const {
  GraphSpec spec;
  spec.vertices = vertex_ids_;
  for (const auto& e : edges_)
    spec.edges.push_back({e.id,
                          {vertex_ids_[static_cast<size_t>(e.v_init)],
                           vertex_ids_[static_cast<size_t>(e.v_term)]},
                          rational_str(e.length)});
  return spec;
}

std::vector<std::pair<std::string, Rational>> locate(const QuantumGraph& g,
                                                     const EdgePoint& p) {
  int ei = g.edge_index(p.edge);
  const auto& e = g.edge(ei);
  if (p.x <= 0 || p.x >= e.length)
    throw GraphError("point " + rational_str(p.x) + " is not interior to edge '" +
                     p.edge + "' of length " + rational_str(e.length));
  return {{g.vertex_ids()[static_cast<size_t>(e.v_init)], p.x},
          {g.vertex_ids()[static_cast<size_t>(e.v_term)], Rational(e.length - p.x)}};
}

Rational end_distance(const QuantumGraph& g, const EdgeEnd& ee, const EdgePoint& p) {
  int ei = g.edge_index(p.edge);
  if (ei != ee.edge) throw GraphError("edge end does not belong to the point's edge");
  const auto& e = g.edge(ei);
  if (p.x <= 0 || p.x >= e.length)
    throw GraphError("point is not interior to its edge");
  return ee.end == 0 ? p.x : Rational(e.length - p.x);
}

}  // namespace qgk
