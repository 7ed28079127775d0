#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgraph/gallery.hpp"

namespace qgraph {

double tree_theta(int b) {
  if (b < 1) throw GraphError("branching must be positive");
  const double s = std::sqrt(static_cast<double>(b));
  return std::acos(2.0 / (s + 1.0 / s));
}

double matched_interval_length(int b) {
  const double theta = tree_theta(b);
  if (!(theta > 0.0)) throw GraphError("branching 1 has no positive threshold");
  return std::numbers::pi / (2.0 * theta);
}

MetricGraph make_line(double length) {
  GraphSpec s;
  s.vertices = {0, 1, 2};
  s.edges = {{0, 1, 0, length}, {1, 1, 2, length}};
  s.truncated_ends = {{0, "ray end, natural"}, {2, "ray end, natural"}};
  return MetricGraph::build(s);
}

MetricGraph make_star(int rays, double length) {
  if (rays < 1) throw GraphError("star needs at least one ray");
  GraphSpec s;
  s.vertices.push_back(0);
  for (int i = 1; i <= rays; ++i) {
    s.vertices.push_back(i);
    s.edges.push_back({i - 1, 0, i, length});
    s.truncated_ends.push_back({i, "ray end, natural"});
  }
  return MetricGraph::build(s);
}

MetricGraph make_cycle(double length) {
  GraphSpec s;
  s.vertices = {0};
  s.edges = {{0, 0, 0, length}};
  return MetricGraph::build(s);
}

MetricGraph make_tree(int b, int depth) {
  if (b < 1 || depth < 1) throw GraphError("tree needs b >= 1 and depth >= 1");
  GraphSpec s;
  s.vertices.push_back(0);
  std::vector<int> level{0};
  int next = 1;
  for (int d = 1; d <= depth; ++d) {
    std::vector<int> children;
    for (int parent : level) {
      for (int c = 0; c < b; ++c) {
        s.vertices.push_back(next);
        s.edges.push_back({next - 1, parent, next, 1.0});
        children.push_back(next++);
      }
    }
    level = std::move(children);
  }
  for (int leaf : level) {
    s.dirichlet_vertices.push_back(leaf);
    s.truncated_ends.push_back({leaf, "tree level cut, Dirichlet"});
  }
  return MetricGraph::build(s);
}

MetricGraph make_half_line(double length) {
  GraphSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 0, 1, length}};
  s.truncated_ends = {{1, "ray end, natural"}};
  return MetricGraph::build(s);
}

MetricGraph make_interval(double length, bool dirichlet_ends) {
  GraphSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 0, 1, length}};
  if (dirichlet_ends) s.dirichlet_vertices = {0, 1};
  return MetricGraph::build(s);
}

MetricGraph make_glued_tree_star(int b, int depth, int k) {
  if (k < 1) throw GraphError("need at least one pendant interval");
  GraphSpec s = make_tree(b, depth).spec();
  const double len = matched_interval_length(b);
  int vid = *std::max_element(s.vertices.begin(), s.vertices.end()) + 1;
  int eid = static_cast<int>(s.edges.size());
  for (int j = 0; j < k; ++j) {
    s.vertices.push_back(vid);
    s.edges.push_back({eid++, 0, vid++, len});
  }
  return MetricGraph::build(s);
}

LeadGraph make_compact_plus_lead(const GraphSpec& compact, int glue_vertex, double lead_length, double lambda_bar) {
  if (std::find(compact.vertices.begin(), compact.vertices.end(), glue_vertex) == compact.vertices.end())
    throw GraphError("glue vertex not in the compact graph");
  if (!(lambda_bar >= 0.0)) throw GraphError("lead potential must be nonnegative");
  GraphSpec s = compact;
  const int end = *std::max_element(s.vertices.begin(), s.vertices.end()) + 1;
  int eid = 0;
  for (const auto& e : s.edges) eid = std::max(eid, e.id + 1);
  s.vertices.push_back(end);
  s.edges.push_back({eid, glue_vertex, end, lead_length});
  s.truncated_ends.push_back({end, "lead end, natural"});
  LeadGraph out{MetricGraph::build(s), {}, 0, 0};
  out.junction = out.graph.vertex_index(glue_vertex);
  out.lead_edge = out.graph.edge_index(eid);
  out.potential = Potential::zero(out.graph);
  out.potential.set_edge(out.graph, out.lead_edge, {{lead_length, lambda_bar}});
  return out;
}

Partition branch_cut_partition(const MetricGraph& tree, int k) {
  if (k < 1) throw PartitionError("k must be positive");
  std::vector<Point> cuts;
  int current = 0;
  std::vector<Subgraph> comps = cut_components(tree, cuts);
  while (static_cast<int>(comps.size()) < k) {
    int child = -1;
    for (const auto& end : tree.incident(current)) {
      const Edge& e = tree.edge(end.edge);
      if (!end.at_end && e.from == current && e.to != current) {
        child = e.to;
        break;
      }
    }
    if (child < 0 || tree.is_dirichlet_vertex(child)) throw PartitionError("tree too shallow for the requested k");
    cuts.push_back(tree.vertex_point(child));
    comps = cut_components(tree, cuts);
    current = child;
  }
  std::vector<std::size_t> order(comps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return volume(comps[a]) > volume(comps[b]); });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  Partition p;
  for (std::size_t i : order) p.clusters.push_back(comps[i]);
  p.cuts = cuts;
  p.exhaustive = static_cast<int>(comps.size()) == k;
  return p;
}

}  // namespace qgraph
