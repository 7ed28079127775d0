#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/partition.hpp"
#include "qgraph/potential.hpp"

namespace qgraph {

/// theta = arccos(2 / (sqrt(b) + 1/sqrt(b))); the spectrum of the rooted
/// homogeneous tree with branching b starts at theta^2.
[[nodiscard]] double tree_theta(int b);
/// pi / (2 theta): the interval length whose mixed ground energy is theta^2.
[[nodiscard]] double matched_interval_length(int b);

/// Two rays of length L from a centre vertex (index 1); far ends are natural.
[[nodiscard]] MetricGraph make_line(double length);
/// m rays of length L from the hub (index 0); far ends are natural.
[[nodiscard]] MetricGraph make_star(int rays, double length);
/// One loop edge on a single vertex.
[[nodiscard]] MetricGraph make_cycle(double length);
/// Root (index 0) with b children; every non-leaf has b children; unit
/// edges; leaves at the given depth are Dirichlet.
[[nodiscard]] MetricGraph make_tree(int b, int depth);
/// [0, L] from vertex 0; the end at L is natural.
[[nodiscard]] MetricGraph make_half_line(double length);
/// Unit-free interval [0, L]; ends Dirichlet or natural.
[[nodiscard]] MetricGraph make_interval(double length, bool dirichlet_ends);
/// make_tree(b, depth) with k pendant intervals of matched length glued at
/// the root; the intervals' far ends are natural.
[[nodiscard]] MetricGraph make_glued_tree_star(int b, int depth, int k);

struct LeadGraph {
  MetricGraph graph;
  Potential potential;
  int junction = 0;  // vertex index
  int lead_edge = 0;
};

/// Compact graph with V = 0 glued at `glue_vertex` (external id) to a lead of
/// the given length carrying V = lambda_bar; the lead end is natural.
[[nodiscard]] LeadGraph make_compact_plus_lead(const GraphSpec& compact, int glue_vertex, double lead_length,
                                               double lambda_bar);

/// Cuts the tree at vertices along its first branch until at least k
/// components exist and keeps the k of largest volume.
[[nodiscard]] Partition branch_cut_partition(const MetricGraph& tree, int k);

struct CaseCheck {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string source;  // closed form or oracle behind `expected`
  bool passed = false;
};

struct CaseReport {
  std::string name;
  bool passed = false;
  std::string error;
  double seconds = 0.0;
  std::vector<CaseCheck> checks;
};

class CaseContext {
 public:
  /// |value - expected| <= tolerance
  void near(const std::string& name, double value, double expected, double tolerance, const std::string& source);
  /// |value - expected| <= tolerance * |expected|
  void near_relative(const std::string& name, double value, double expected, double tolerance,
                     const std::string& source);
  /// value <= bound + tolerance
  void at_most(const std::string& name, double value, double bound, double tolerance, const std::string& source);
  void holds(const std::string& name, bool condition, const std::string& source);

  std::vector<CaseCheck> checks;
};

struct GalleryCase {
  std::string name;
  std::string description;
  std::function<void(CaseContext&)> body;
};

[[nodiscard]] const std::vector<GalleryCase>& gallery_cases();
[[nodiscard]] CaseReport run_case(const GalleryCase& c);
/// Runs the named case, or every case for "all". Throws on unknown names.
[[nodiscard]] std::vector<CaseReport> run_gallery(const std::string& selection, Execution execution);

}  // namespace qgraph
