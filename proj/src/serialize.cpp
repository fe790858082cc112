#include "qgk/serialize.hpp"

#include <fstream>

#include "qgk/errors.hpp"

namespace qgk {

using nlohmann::json;

GraphSpec graph_from_json(const json& j) {
  GraphSpec spec;
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw GraphError("graph file must be an object with 'vertices' and 'edges'");
  for (const auto& v : j.at("vertices")) spec.vertices.push_back(v.get<std::string>());
  for (const auto& e : j.at("edges")) {
    GraphSpec::EdgeSpec es;
    es.id = e.at("id").get<std::string>();
    const auto& ends = e.at("ends");
    if (!ends.is_array() || ends.size() != 2)
      throw GraphError("edge '" + es.id + "' needs exactly two endpoints");
    es.ends = {ends[0].get<std::string>(), ends[1].get<std::string>()};
    es.length = e.at("length").get<std::string>();
    spec.edges.push_back(std::move(es));
  }
  return spec;
}

json graph_to_json(const GraphSpec& spec) {
  json j;
  j["vertices"] = spec.vertices;
  j["edges"] = json::array();
  for (const auto& e : spec.edges)
    j["edges"].push_back(
        {{"id", e.id}, {"ends", {e.ends[0], e.ends[1]}}, {"length", e.length}});
  return j;
}

QuantumGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw GraphError("graph file '" + path + "' is not valid JSON: " + ex.what());
  }
  return build_graph(graph_from_json(j));
}

json termsum_to_json(const TermSum& sum) {
  json arr = json::array();
  const TermSum compacted = compact(sum);
  for (const auto& t : compacted.terms()) {
    json obj = {{"kind", kind_name(t.kind)},
                {"c", rational_str(t.c.q)},
                {"d", rational_str(t.d)},
                {"s0", rational_str(t.s0)}};
    if (t.c.pi_pow != 0) obj["pi"] = t.c.pi_pow;
    arr.push_back(obj);
  }
  return arr;
}

json densities_to_json(const DensitySeries& series) {
  const QuantumGraph& g = *series.graph;
  json out;
  out["formulation"] =
      series.formulation == Formulation::Nu ? "NU" : "NU_PRIME";
  out["s0"] = rational_str(series.s0);
  out["source"] = {{"edge", series.source.edge},
                   {"x", rational_str(series.source.x)}};
  out["orders"] = json::array();
  for (const auto& sys : series.orders) {
    json order;
    order["order"] = sys.order;
    json mu = json::object();
    for (size_t v = 0; v < g.vertex_count(); ++v)
      mu[g.vertex_ids()[v]] = termsum_to_json(sys.mu[v]);
    order["mu"] = mu;
    json nu = json::array();
    for (size_t e = 0; e < g.edge_count(); ++e)
      for (int end = 0; end < 2; ++end) {
        const EdgeEnd ee{static_cast<int>(e), end};
        nu.push_back(
            {{"edge", g.edge(ee.edge).id},
             {"end", end == 0 ? "init" : "term"},
             {"vertex", g.vertex_ids()[static_cast<size_t>(g.end_vertex(ee))]},
             {"terms", termsum_to_json(sys.nu_at(ee))}});
      }
    order["nu"] = nu;
    out["orders"].push_back(order);
  }
  return out;
}

TermSum termsum_from_json(const json& j) {
  TermSum sum;
  for (const auto& obj : j) {
    const std::string kind = obj.at("kind").get<std::string>();
    Kind k;
    if (kind == "LOG")
      k = Kind::Log;
    else if (kind == "EVEN")
      k = Kind::Even;
    else if (kind == "ODD")
      k = Kind::Odd;
    else
      throw Error("unknown term kind '" + kind + "'");
    Coeff c(parse_rational(obj.at("c").get<std::string>()),
            obj.contains("pi") ? obj.at("pi").get<int>() : 0);
    sum.add({k, c, parse_rational(obj.at("d").get<std::string>()),
             parse_rational(obj.at("s0").get<std::string>())});
  }
  return sum;
}

}  // namespace qgk
