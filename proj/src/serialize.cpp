#include <json.hpp>

#include "ising_ais/errors.hpp"
#include "ising_ais/model.hpp"

namespace ising_ais {

using ordered_json = nlohmann::ordered_json;

std::string graph_to_json(const IsingGraph& g, const LatticeGeometry* geometry) {
  ordered_json j;
  j["n_interior"] = g.n_interior();
  auto edges = ordered_json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  j["field"] = std::vector<double>(g.field().begin(), g.field().end());
  j["beta"] = g.beta();
  if (geometry != nullptr && !geometry->coords.empty()) {
    auto coords = ordered_json::array();
    for (const auto& c : geometry->coords) coords.push_back({c[0], c[1]});
    j["coords"] = std::move(coords);
  }
  return j.dump();
}

IsingGraph graph_from_json(const std::string& text, LatticeGeometry* geometry) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    const auto n = j.at("n_interior").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) throw StructuralError("edge entries must be [i, j] pairs");
      edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>()});
    }
    auto field = j.at("field").get<std::vector<double>>();
    const double beta = j.at("beta").get<double>();
    if (geometry != nullptr) {
      geometry->coords.clear();
      if (j.contains("coords")) {
        for (const auto& c : j["coords"]) geometry->coords.push_back({c.at(0), c.at(1)});
      }
    }
    return IsingGraph(n, std::move(edges), std::move(field), beta);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace ising_ais
