#include "seifert/certificate.hpp"

#include <json.hpp>

namespace seifert {

namespace {

using nlohmann::json;

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

json component_json(const ComponentRecord& c) {
  json cut = json::array();
  for (const auto& [x, y] : c.cut) cut.push_back(json::array({x, y}));
  json dominance = json::array();
  for (const auto& r : c.dominance) {
    dominance.push_back({{"diagonal", r.diagonal.str()},
                         {"off_diagonal", r.off_diagonal.str()},
                         {"rhs_mass", r.rhs_mass.str()},
                         {"strict", r.strict_with_rhs()}});
  }
  return {{"vertices", c.vertices},
          {"cut", std::move(cut)},
          {"witness", c.witness},
          {"rows", c.rows},
          {"symbols", c.symbols},
          {"matrix", matrix_json(c.matrix)},
          {"rhs", matrix_json(c.rhs)},
          {"dominance", std::move(dominance)},
          {"determinant", c.determinant.str()},
          {"adjugate", matrix_json(c.adjugate)},
          {"solution", matrix_json(c.solution)},
          {"witness_fiber", {{"projectively_infinite", "fiber of a neighbour of a faithful block"},
                             {"projectively_finite", !c.determinant.is_zero()}}},
          {"contradiction", c.contradiction}};
}

}  // namespace

std::string dump_certificate(const Certificate& cert) {
  json vertices = json::array();
  for (const auto& v : cert.vertices) {
    json comps = json::array();
    for (const auto& c : v.components) comps.push_back(component_json(c));
    vertices.push_back({{"vertex", v.vertex}, {"neighbors", v.neighbors}, {"components", std::move(comps)}});
  }
  const json doc = {
      {"schema", kCertificateSchema},
      {"schema_version", kCertificateSchemaVersion},
      {"tool_version", kToolVersion},
      {"manifold", {{"sha256", cert.manifold_hash}, {"text", cert.manifold_text}}},
      {"options", {{"size_bound", std::to_string(cert.size_bound)},
                   {"cut_bound", std::to_string(cert.cut_bound)}}},
      {"scope", "every connected candidate component avoiding the vertex and touching it, "
                "with every cut of its internal edges that keeps it connected"},
      {"complete", cert.complete},
      {"gaps", cert.gaps},
      {"vertices", std::move(vertices)},
      {"conclusion", cert.conclusion ? "no vertex faithful representation" : "inconclusive"},
  };
  return doc.dump(2) + "\n";
}

}  // namespace seifert
