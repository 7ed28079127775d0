#pragma once

#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

/// Piecewise-constant function on [start, end]: piece i covers
/// [breaks[i], breaks[i+1]) and the last piece is closed on the right.
struct Piecewise {
  std::vector<double> breaks;
  std::vector<double> values;

  [[nodiscard]] double at(double x) const;
  [[nodiscard]] double integral() const;
  /// Integral over [lo, hi] clipped to the support.
  [[nodiscard]] double integral(double lo, double hi) const;
  [[nodiscard]] double min_value() const;
};

/// One piece of the file format: value holds up to (and excluding) `upto`.
struct PotentialPiece {
  double upto = 0.0;
  double value = 0.0;
};

/// Nonnegative piecewise-constant landscape V; edges without a description
/// carry V = 0.
class Potential {
 public:
  static Potential zero(const MetricGraph& g);
  static Potential constant(const MetricGraph& g, double value);

  /// Replaces the description on one edge. The last `upto` must reach the edge
  /// length; throws GraphError on negative values or non-increasing breaks.
  Potential& set_edge(const MetricGraph& g, int edge, const std::vector<PotentialPiece>& pieces);

  [[nodiscard]] const Piecewise& on_edge(int edge) const { return edges_.at(static_cast<std::size_t>(edge)); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  /// V + c with c >= 0.
  [[nodiscard]] Potential shifted(double c) const;
  [[nodiscard]] double min_value() const;

 private:
  std::vector<Piecewise> edges_;
};

/// V restricted to a subgraph: one local description per retained piece, in
/// piece-local coordinates starting at 0.
struct RestrictedPotential {
  struct Segment {
    int edge = 0;
    Interval span;
    Piecewise local;
  };
  std::vector<Segment> segments;
};

[[nodiscard]] double evaluate(const MetricGraph& g, const Potential& v, const Point& p);
[[nodiscard]] RestrictedPotential restrict(const Potential& v, const Subgraph& s);
[[nodiscard]] double integrate(const Potential& v, const Subgraph& s);
[[nodiscard]] double integrate(const RestrictedPotential& v);

}  // namespace qgraph
