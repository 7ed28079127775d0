#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

/// Raised for malformed graph descriptions, invalid points and bad radii.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain description of a metric graph as read from a file or produced by a
/// generator. Ids are external; the MetricGraph maps them to dense indices.
struct GraphSpec {
  struct EdgeSpec {
    int id = 0;
    int from = 0;
    int to = 0;
    double length = 0.0;
  };
  struct TruncatedEnd {
    int vertex = 0;
    std::string tag;
  };

  std::vector<int> vertices;
  std::vector<EdgeSpec> edges;
  std::vector<TruncatedEnd> truncated_ends;
  /// Vertices carrying a Dirichlet condition in every subgraph that retains
  /// them (e.g. the cut-off leaves of a truncated tree).
  std::vector<int> dirichlet_vertices;
};

struct Edge {
  int id = 0;    // external id
  int from = 0;  // vertex index
  int to = 0;    // vertex index
  double length = 0.0;

  [[nodiscard]] bool is_loop() const { return from == to; }
};

/// One end of an edge as seen from a vertex.
struct EdgeEnd {
  int edge = 0;
  bool at_end = false;  // false: offset 0 (edge.from), true: offset length (edge.to)
};

/// A point of the metric graph. Points at offset 0 or at the edge length are
/// stored as vertex points, so each location has exactly one representation.
struct Point {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;

  [[nodiscard]] bool is_vertex() const { return vertex >= 0; }
  friend bool operator==(const Point&, const Point&) = default;
};

class MetricGraph {
 public:
  /// Validates ids, lengths and connectivity. Throws GraphError.
  static MetricGraph build(const GraphSpec& spec);

  [[nodiscard]] std::size_t vertex_count() const { return vertex_ids_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] const Edge& edge(int index) const { return edges_.at(static_cast<std::size_t>(index)); }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] int vertex_id(int index) const { return vertex_ids_.at(static_cast<std::size_t>(index)); }
  [[nodiscard]] std::span<const EdgeEnd> incident(int vertex) const {
    return incident_.at(static_cast<std::size_t>(vertex));
  }
  [[nodiscard]] std::size_t degree(int vertex) const { return incident(vertex).size(); }

  /// Dense index of an external id, or -1.
  [[nodiscard]] int vertex_index(int id) const;
  [[nodiscard]] int edge_index(int id) const;

  [[nodiscard]] bool is_dirichlet_vertex(int vertex) const {
    return dirichlet_.at(static_cast<std::size_t>(vertex));
  }
  [[nodiscard]] std::span<const GraphSpec::TruncatedEnd> truncated_ends() const { return truncated_; }
  [[nodiscard]] const GraphSpec& spec() const { return spec_; }
  [[nodiscard]] double total_length() const;

  [[nodiscard]] Point vertex_point(int vertex) const;
  /// Canonical point at `offset` along edge `edge`; offsets at the ends map to
  /// the end vertices. Throws GraphError if the offset is outside [0, length].
  [[nodiscard]] Point point_on_edge(int edge, double offset) const;
  [[nodiscard]] bool is_valid(const Point& p) const;

 private:
  GraphSpec spec_;
  std::vector<int> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeEnd>> incident_;
  std::vector<bool> dirichlet_;
  std::vector<GraphSpec::TruncatedEnd> truncated_;  // vertex stored as index
};

/// Shortest-path distances from a point to every vertex.
[[nodiscard]] std::vector<double> vertex_distances(const MetricGraph& g, const Point& from);

/// Path-metric distance between two points.
[[nodiscard]] double distance(const MetricGraph& g, const Point& p, const Point& q);

/// Largest distance from `from` to any vertex.
[[nodiscard]] double eccentricity(const MetricGraph& g, const Point& from);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A closed region of a metric graph: sorted, disjoint, positive-length
/// sub-intervals per edge. The Dirichlet boundary is the topological boundary
/// of the region plus graph-level Dirichlet vertices plus explicit marks.
/// Marked vertices behave as cuts: pieces meeting there are not joined.
///
/// A Subgraph keeps a pointer to its graph, which must outlive it.
class Subgraph {
 public:
  Subgraph() = default;
  Subgraph(const MetricGraph& g, std::vector<std::vector<Interval>> pieces, std::vector<Point> marks = {});

  static Subgraph whole(const MetricGraph& g, std::vector<Point> marks = {});
  static Subgraph empty(const MetricGraph& g);

  [[nodiscard]] const MetricGraph& graph() const { return *graph_; }
  [[nodiscard]] bool is_empty() const;
  [[nodiscard]] std::span<const Interval> pieces(int edge) const {
    return pieces_.at(static_cast<std::size_t>(edge));
  }
  [[nodiscard]] const std::vector<std::vector<Interval>>& all_pieces() const { return pieces_; }
  [[nodiscard]] std::span<const Point> marks() const { return marks_; }
  [[nodiscard]] std::span<const Point> boundary() const { return boundary_; }
  [[nodiscard]] int component_count() const { return component_count_; }
  [[nodiscard]] std::size_t piece_count() const;

  /// True if the vertex is an endpoint of some retained piece.
  [[nodiscard]] bool contains_vertex(int vertex) const;
  [[nodiscard]] bool contains(const Point& p) const;
  [[nodiscard]] bool is_dirichlet(const Point& p) const;
  /// True if the vertex is a Dirichlet mark or a graph-level Dirichlet vertex.
  [[nodiscard]] bool splits_at(int vertex) const;
  /// Lowest edge index with a retained piece, or -1 when empty.
  [[nodiscard]] int first_edge() const;

  friend bool operator==(const Subgraph& a, const Subgraph& b) {
    return a.pieces_ == b.pieces_ && a.marks_ == b.marks_;
  }

 private:
  void finalize();

  const MetricGraph* graph_ = nullptr;
  std::vector<std::vector<Interval>> pieces_;
  std::vector<Point> marks_;
  std::vector<Point> boundary_;
  int component_count_ = 0;
};

[[nodiscard]] Subgraph ball(const MetricGraph& g, const Point& center, double radius);
/// Closure of the complement of the open ball; may be empty or disconnected.
[[nodiscard]] Subgraph exterior(const MetricGraph& g, const Point& center, double radius);
/// Closed annulus r1 <= dist <= r2 with isolated points removed. Requires 0 < r1 < r2.
[[nodiscard]] Subgraph annulus(const MetricGraph& g, const Point& center, double r1, double r2);
[[nodiscard]] Subgraph intersect(const Subgraph& a, const Subgraph& b);
/// True if every piece of `inner` is contained in a piece of `outer`.
[[nodiscard]] bool is_subset(const Subgraph& inner, const Subgraph& outer);
/// Connected components, ordered by lowest edge index; each inherits marks.
[[nodiscard]] std::vector<Subgraph> components(const Subgraph& s);
[[nodiscard]] double volume(const Subgraph& s);

}  // namespace qgraph
