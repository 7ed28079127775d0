#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qgraph/gallery.hpp"
#include "qgraph/io.hpp"

using namespace qgraph;
using std::numbers::pi;

namespace {

const char* kLeadGraph = R"({
  "vertices": [0, 1, 2],
  "edges": [
    {"id": 5, "from": 0, "to": 1, "length": 1.0},
    {"id": 7, "from": 1, "to": 2, "length": 4.0}
  ],
  "truncated_ends": [{"vertex": 2, "tag": "lead end"}],
  "dirichlet_vertices": [0],
  "potential": [{"edge": 7, "pieces": [{"upto": 1.5, "value": 0.0}, {"upto": 4.0, "value": 2.5}]}]
})";

}  // namespace

TEST_CASE("graph files parse") {
  const GraphFile f = parse_graph(kLeadGraph);
  CHECK(f.graph.edge_count() == 2);
  CHECK(f.graph.edge_index(7) == 1);
  CHECK(f.graph.is_dirichlet_vertex(0));
  CHECK(f.graph.truncated_ends().size() == 1);
  CHECK(evaluate(f.graph, f.potential, f.graph.point_on_edge(1, 2.0)) == 2.5);
  CHECK(evaluate(f.graph, f.potential, f.graph.point_on_edge(1, 1.0)) == 0.0);
}

TEST_CASE("graph files round-trip") {
  const GraphFile f = parse_graph(kLeadGraph);
  const std::string once = graph_to_json(f.graph, f.potential);
  const GraphFile g = parse_graph(once);
  CHECK(graph_to_json(g.graph, g.potential) == once);
  CHECK(g.graph.total_length() == f.graph.total_length());
}

TEST_CASE("malformed graph files are rejected") {
  CHECK_THROWS_AS((void)parse_graph("{"), GraphError);
  CHECK_THROWS_AS((void)parse_graph("[]"), GraphError);
  CHECK_THROWS_AS((void)parse_graph(R"({"edges": []})"), GraphError);
  CHECK_THROWS_AS((void)parse_graph(R"({"vertices": [0, 1], "edges": [{"id": 0, "from": 0, "to": 1}]})"), GraphError);
  CHECK_THROWS_AS(
      (void)parse_graph(R"({"vertices": [0, 1], "edges": [{"id": 0, "from": 0, "to": 1, "length": -1}]})"),
      GraphError);
  CHECK_THROWS_AS((void)parse_graph(R"({"vertices": [0, 1], "edges": [{"id": 0, "from": 0, "to": 1, "length": 1}],
                                       "potential": [{"edge": 3, "pieces": [{"upto": 1, "value": 1}]}]})"),
                  GraphError);
  CHECK_THROWS_AS((void)parse_graph(R"({"vertices": [0, 1], "edges": [{"id": 0, "from": 0, "to": 1, "length": 1}],
                                       "potential": [{"edge": 0, "pieces": [{"upto": 1, "value": -1}]}]})"),
                  GraphError);
  CHECK_THROWS_AS((void)read_graph("/nonexistent/graph.json"), GraphError);
}

TEST_CASE("points parse and print") {
  const GraphFile f = parse_graph(kLeadGraph);
  CHECK(parse_point(f.graph, "v1") == f.graph.vertex_point(1));
  CHECK(parse_point(f.graph, "2") == f.graph.vertex_point(2));
  CHECK(parse_point(f.graph, "e7:1.5") == f.graph.point_on_edge(1, 1.5));
  CHECK(parse_point(f.graph, "e7:0") == f.graph.vertex_point(1));
  CHECK(point_to_string(f.graph, f.graph.point_on_edge(1, 1.5)) == "e7:1.5");
  CHECK(point_to_string(f.graph, f.graph.vertex_point(2)) == "v2");
  CHECK_THROWS_AS((void)parse_point(f.graph, "v9"), GraphError);
  CHECK_THROWS_AS((void)parse_point(f.graph, "e9:0.5"), GraphError);
  CHECK_THROWS_AS((void)parse_point(f.graph, "e7"), GraphError);
  CHECK_THROWS_AS((void)parse_point(f.graph, ""), GraphError);
}

TEST_CASE("subgraph specifications") {
  const MetricGraph c = make_cycle(1.0);
  CHECK(volume(parse_subgraph(c, "whole")) == doctest::Approx(1.0));
  CHECK(volume(parse_subgraph(c, "ball:0.2@v0")) == doctest::Approx(0.4));
  CHECK(volume(parse_subgraph(c, "exterior:0.2@v0")) == doctest::Approx(0.6));
  CHECK(volume(parse_subgraph(c, "annulus:0.1:0.3@v0")) == doctest::Approx(0.4));
  CHECK_THROWS_AS((void)parse_subgraph(c, "disc:0.2@v0"), GraphError);
  CHECK_THROWS_AS((void)parse_subgraph(c, "annulus:0.2@v0"), GraphError);
  CHECK_THROWS_AS((void)parse_subgraph(c, "/nonexistent/region.json"), GraphError);
}

TEST_CASE("partition files round-trip") {
  const MetricGraph g = make_star(3, 2.0);
  const std::vector<Point> cuts{g.vertex_point(0), g.point_on_edge(1, 1.0 / 3.0)};
  Partition p;
  p.cuts = cuts;
  p.clusters = cut_components(g, cuts);
  const std::string once = partition_to_json(p);
  const Partition back = parse_partition(g, once);
  CHECK(back.clusters.size() == p.clusters.size());
  CHECK(validate(back).ok());
  CHECK(partition_to_json(back) == once);
  for (std::size_t i = 0; i < p.clusters.size(); ++i)
    CHECK(volume(back.clusters[i]) == doctest::Approx(volume(p.clusters[i])).epsilon(1e-11));
  CHECK_THROWS_AS((void)parse_partition(g, R"({"cuts": []})"), GraphError);
}

TEST_CASE("reports are deterministic and rounded") {
  CHECK(round12(pi) == 3.14159265359);
  CHECK(round12(0.0) == 0.0);
  const MetricGraph g = make_interval(1.0, true);
  const auto values = eigenvalues_below(Subgraph::whole(g), Potential::zero(g), 0.05, 2);
  const std::string a = spectrum_report(values, 0.05, 1e-10);
  const std::string b =
      spectrum_report(eigenvalues_below(Subgraph::whole(g), Potential::zero(g), 0.05, 2), 0.05, 1e-10);
  CHECK(a == b);
  CHECK(a.find("\"eigenvalues\"") != std::string::npos);

  const auto reports = run_gallery("interval_oracle", Execution::serial);
  CHECK(gallery_report(reports) == gallery_report(run_gallery("interval_oracle", Execution::parallel)));
}
