#include "qgraph/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qgraph {

using Json = nlohmann::ordered_json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

double get_double(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) throw GraphError(where + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

int get_int(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw GraphError(where + ": missing integer field '" + key + "'");
  return j.at(key).get<int>();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw GraphError(std::string("malformed JSON: ") + e.what());
  }
}

Json point_json(const MetricGraph& g, const Point& p) {
  Json j;
  if (p.is_vertex()) {
    j["vertex"] = g.vertex_id(p.vertex);
  } else {
    j["edge"] = g.edge(p.edge).id;
    j["offset"] = number(p.offset);
  }
  return j;
}

Point point_from_json(const MetricGraph& g, const Json& j) {
  if (j.contains("vertex")) {
    const int v = g.vertex_index(get_int(j, "vertex", "point"));
    if (v < 0) throw GraphError("point: unknown vertex");
    return g.vertex_point(v);
  }
  const int e = g.edge_index(get_int(j, "edge", "point"));
  if (e < 0) throw GraphError("point: unknown edge");
  return g.point_on_edge(e, get_double(j, "offset", "point"));
}

Json cluster_json(const Subgraph& s) {
  const MetricGraph& g = s.graph();
  Json pieces = Json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& p : s.pieces(static_cast<int>(e)))
      pieces.push_back({{"edge", g.edge(static_cast<int>(e)).id}, {"start", number(p.lo)}, {"end", number(p.hi)}});
  return pieces;
}

std::vector<std::vector<Interval>> pieces_from_json(const MetricGraph& g, const Json& list) {
  if (!list.is_array()) throw GraphError("cluster: expected a list of pieces");
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (const auto& p : list) {
    const int e = g.edge_index(get_int(p, "edge", "piece"));
    if (e < 0) throw GraphError("piece: unknown edge");
    pieces[static_cast<std::size_t>(e)].push_back({get_double(p, "start", "piece"), get_double(p, "end", "piece")});
  }
  return pieces;
}

Json sample_json(const ScanSample& s) {
  return {{"R", number(s.radius)}, {"lambda", number(s.lambda)}, {"error_indicator", number(s.error_indicator)}};
}

Json energy_json(const EnergyReport& r) {
  Json clusters = Json::array();
  for (const auto& c : r.clusters)
    clusters.push_back({{"lambda", number(c.lambda)}, {"lambda_h", number(c.lambda_h)},
                        {"error_indicator", number(c.error_indicator)}});
  return {{"energy", number(r.energy)}, {"argmax", r.argmax}, {"ties", r.ties}, {"clusters", clusters}};
}

}  // namespace

GraphFile parse_graph(const std::string& json_text) {
  const Json j = parse_json(json_text);
  if (!j.is_object()) throw GraphError("graph file: expected an object");
  GraphSpec spec;
  if (!j.contains("vertices") || !j.at("vertices").is_array()) throw GraphError("graph file: missing 'vertices'");
  for (const auto& v : j.at("vertices")) {
    if (!v.is_number_integer()) throw GraphError("graph file: vertex ids must be integers");
    spec.vertices.push_back(v.get<int>());
  }
  if (!j.contains("edges") || !j.at("edges").is_array()) throw GraphError("graph file: missing 'edges'");
  for (const auto& e : j.at("edges"))
    spec.edges.push_back({get_int(e, "id", "edge"), get_int(e, "from", "edge"), get_int(e, "to", "edge"),
                          get_double(e, "length", "edge")});
  if (j.contains("truncated_ends"))
    for (const auto& t : j.at("truncated_ends"))
      spec.truncated_ends.push_back({get_int(t, "vertex", "truncated end"), t.value("tag", std::string())});
  if (j.contains("dirichlet_vertices"))
    for (const auto& v : j.at("dirichlet_vertices")) spec.dirichlet_vertices.push_back(v.get<int>());

  GraphFile out{MetricGraph::build(spec), {}};
  out.potential = Potential::zero(out.graph);
  if (j.contains("potential")) {
    for (const auto& block : j.at("potential")) {
      const int e = out.graph.edge_index(get_int(block, "edge", "potential"));
      if (e < 0) throw GraphError("potential: unknown edge");
      std::vector<PotentialPiece> pieces;
      if (!block.contains("pieces")) throw GraphError("potential: missing 'pieces'");
      for (const auto& p : block.at("pieces"))
        pieces.push_back({get_double(p, "upto", "potential piece"), get_double(p, "value", "potential piece")});
      out.potential.set_edge(out.graph, e, pieces);
    }
  }
  return out;
}

GraphFile read_graph(const std::string& path) { return parse_graph(read_text(path)); }

std::string graph_to_json(const MetricGraph& g, const Potential& v) {
  const GraphSpec& s = g.spec();
  Json j;
  j["vertices"] = s.vertices;
  j["edges"] = Json::array();
  for (const auto& e : s.edges)
    j["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", number(e.length)}});
  j["truncated_ends"] = Json::array();
  for (const auto& t : s.truncated_ends) j["truncated_ends"].push_back({{"vertex", t.vertex}, {"tag", t.tag}});
  j["dirichlet_vertices"] = s.dirichlet_vertices;
  j["potential"] = Json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Piecewise& pw = v.on_edge(static_cast<int>(e));
    bool zero = true;
    for (double x : pw.values) zero = zero && x == 0.0;
    if (zero) continue;
    Json pieces = Json::array();
    for (std::size_t i = 0; i < pw.values.size(); ++i)
      pieces.push_back({{"upto", number(pw.breaks[i + 1])}, {"value", number(pw.values[i])}});
    j["potential"].push_back({{"edge", g.edge(static_cast<int>(e)).id}, {"pieces", pieces}});
  }
  return j.dump(2) + "\n";
}

Point parse_point(const MetricGraph& g, const std::string& text) {
  if (text.empty()) throw GraphError("empty point");
  if (text[0] == 'e') {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw GraphError("edge point must look like e<id>:<offset>");
    const int e = g.edge_index(std::stoi(text.substr(1, colon - 1)));
    if (e < 0) throw GraphError("unknown edge in point " + text);
    return g.point_on_edge(e, std::stod(text.substr(colon + 1)));
  }
  const int v = g.vertex_index(std::stoi(text[0] == 'v' ? text.substr(1) : text));
  if (v < 0) throw GraphError("unknown vertex in point " + text);
  return g.vertex_point(v);
}

std::string point_to_string(const MetricGraph& g, const Point& p) {
  if (p.is_vertex()) return "v" + std::to_string(g.vertex_id(p.vertex));
  return "e" + std::to_string(g.edge(p.edge).id) + ":" + format_number(p.offset);
}

Subgraph parse_subgraph(const MetricGraph& g, const std::string& text) {
  if (text == "whole") return Subgraph::whole(g);
  const auto at = text.find('@');
  const auto colon = text.find(':');
  if (at != std::string::npos && colon != std::string::npos && colon < at) {
    const std::string kind = text.substr(0, colon);
    const Point root = parse_point(g, text.substr(at + 1));
    const std::string radii = text.substr(colon + 1, at - colon - 1);
    if (kind == "ball") return ball(g, root, std::stod(radii));
    if (kind == "exterior") return exterior(g, root, std::stod(radii));
    if (kind == "annulus") {
      const auto c2 = radii.find(':');
      if (c2 == std::string::npos) throw GraphError("annulus needs two radii");
      return annulus(g, root, std::stod(radii.substr(0, c2)), std::stod(radii.substr(c2 + 1)));
    }
    throw GraphError("unknown subgraph kind " + kind);
  }
  const Json j = parse_json(read_text(text));
  std::vector<Point> marks;
  if (j.contains("marks"))
    for (const auto& m : j.at("marks")) marks.push_back(point_from_json(g, m));
  return Subgraph(g, pieces_from_json(g, j.at("pieces")), marks);
}

std::string partition_to_json(const Partition& p) {
  Json j;
  j["clusters"] = Json::array();
  for (const auto& c : p.clusters) j["clusters"].push_back(cluster_json(c));
  j["cuts"] = Json::array();
  if (!p.clusters.empty())
    for (const auto& c : p.cuts) j["cuts"].push_back(point_json(p.clusters.front().graph(), c));
  j["exhaustive"] = p.exhaustive;
  return j.dump(2) + "\n";
}

Partition parse_partition(const MetricGraph& g, const std::string& json_text) {
  const Json j = parse_json(json_text);
  Partition p;
  if (j.contains("cuts"))
    for (const auto& c : j.at("cuts")) p.cuts.push_back(point_from_json(g, c));
  if (!j.contains("clusters")) throw GraphError("partition: missing 'clusters'");
  for (const auto& c : j.at("clusters")) p.clusters.emplace_back(g, pieces_from_json(g, c), p.cuts);
  p.exhaustive = j.value("exhaustive", false);
  return p;
}

std::string spectrum_report(const std::vector<EigenvalueEstimate>& values, double h, double residual_tol) {
  Json j;
  j["h"] = number(h);
  j["residual_tolerance"] = number(residual_tol);
  j["eigenvalues"] = Json::array();
  for (const auto& e : values)
    j["eigenvalues"].push_back({{"lambda", number(e.lambda_extrapolated)}, {"lambda_h", number(e.lambda_h)},
                                {"lambda_half", number(e.lambda_half)}, {"error_indicator", number(e.error_indicator)}});
  return j.dump(2) + "\n";
}

std::string sigma_report(const MetricGraph& g, const Point& root, const SigmaBracket& s) {
  Json j;
  j["root"] = point_to_string(g, root);
  j["lower"] = number(s.lower);
  j["converged"] = s.converged;
  j["trend"] = Json::array();
  for (const auto& t : s.trend) j["trend"].push_back(sample_json(t));
  j["notes"] = s.notes;
  return j.dump(2) + "\n";
}

std::string verdict_report(const ExistenceVerdict& v, const OptimizeResult* search) {
  Json j;
  j["k"] = v.k;
  j["best_energy"] = number(v.best_energy);
  j["sigma_lower"] = number(v.sigma.lower);
  j["sigma_converged"] = v.sigma.converged;
  j["margin"] = number(v.margin);
  j["classification"] = to_string(v.classification);
  j["energy"] = energy_json(v.report);
  if (search) {
    j["topologies_evaluated"] = search->topologies_evaluated;
    j["evaluations"] = search->evaluations;
  }
  return j.dump(2) + "\n";
}

std::string gallery_report(const std::vector<CaseReport>& reports) {
  Json j = Json::array();
  for (const auto& r : reports) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"value", number(c.value)}, {"expected", number(c.expected)},
                        {"tolerance", number(c.tolerance)}, {"source", c.source}, {"passed", c.passed}});
    j.push_back({{"case", r.name}, {"passed", r.passed}, {"error", r.error}, {"checks", checks}});
  }
  return j.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write " + path);
  out << text;
}

}  // namespace qgraph
