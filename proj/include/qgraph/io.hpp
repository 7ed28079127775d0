#pragma once

#include <string>
#include <vector>

#include "qgraph/asymptotics.hpp"
#include "qgraph/gallery.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/partition.hpp"
#include "qgraph/potential.hpp"
#include "qgraph/zones.hpp"

namespace qgraph {

/// A graph file: the graph description plus its potential block.
struct GraphFile {
  MetricGraph graph;
  Potential potential;
};

/// Parses
///   {"vertices": [...], "edges": [{"id","from","to","length"}],
///    "truncated_ends": [{"vertex","tag"}], "dirichlet_vertices": [...],
///    "potential": [{"edge", "pieces": [{"upto","value"}]}]}
/// Throws GraphError with the offending field on malformed input.
[[nodiscard]] GraphFile parse_graph(const std::string& json_text);
[[nodiscard]] GraphFile read_graph(const std::string& path);
[[nodiscard]] std::string graph_to_json(const MetricGraph& g, const Potential& v);

/// "v<id>" or "<id>" for a vertex, "e<id>:<offset>" for an edge point.
[[nodiscard]] Point parse_point(const MetricGraph& g, const std::string& text);
[[nodiscard]] std::string point_to_string(const MetricGraph& g, const Point& p);

/// "whole", "ball:R@P", "exterior:R@P", "annulus:R1:R2@P" or a path to a
/// partition-style JSON file holding one cluster.
[[nodiscard]] Subgraph parse_subgraph(const MetricGraph& g, const std::string& text);

/// {"clusters": [[{"edge","start","end"}...]...], "cuts": [...], "exhaustive"}
[[nodiscard]] std::string partition_to_json(const Partition& p);
[[nodiscard]] Partition parse_partition(const MetricGraph& g, const std::string& json_text);

[[nodiscard]] std::string spectrum_report(const std::vector<EigenvalueEstimate>& values, double h, double residual_tol);
[[nodiscard]] std::string sigma_report(const MetricGraph& g, const Point& root, const SigmaBracket& s);
[[nodiscard]] std::string verdict_report(const ExistenceVerdict& v, const OptimizeResult* search = nullptr);
[[nodiscard]] std::string gallery_report(const std::vector<CaseReport>& reports);

/// Rounds to 12 significant digits, the precision of every report.
[[nodiscard]] double round12(double x);

[[nodiscard]] std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace qgraph
