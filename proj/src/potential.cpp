#include "qgraph/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgraph {

double Piecewise::at(double x) const {
  // right-hand piece at a breakpoint
  auto it = std::upper_bound(breaks.begin() + 1, breaks.end() - 1, x);
  return values[static_cast<std::size_t>(it - (breaks.begin() + 1))];
}

double Piecewise::integral() const { return integral(breaks.front(), breaks.back()); }

double Piecewise::integral(double lo, double hi) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::max(lo, breaks[i]);
    const double b = std::min(hi, breaks[i + 1]);
    if (b > a) sum += values[i] * (b - a);
  }
  return sum;
}

double Piecewise::min_value() const { return *std::min_element(values.begin(), values.end()); }

Potential Potential::zero(const MetricGraph& g) { return constant(g, 0.0); }

Potential Potential::constant(const MetricGraph& g, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw GraphError("potential must be finite and nonnegative");
  Potential v;
  v.edges_.reserve(g.edge_count());
  for (const Edge& e : g.edges()) v.edges_.push_back(Piecewise{{0.0, e.length}, {value}});
  return v;
}

Potential& Potential::set_edge(const MetricGraph& g, int edge, const std::vector<PotentialPiece>& pieces) {
  if (edge < 0 || edge >= static_cast<int>(g.edge_count())) throw GraphError("potential: edge index out of range");
  const double len = g.edge(edge).length;
  if (pieces.empty()) throw GraphError("empty potential description");
  Piecewise pw;
  pw.breaks.push_back(0.0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.value >= 0.0) || !std::isfinite(p.value)) throw GraphError("potential must be finite and nonnegative");
    double upto = p.upto;
    if (i + 1 == pieces.size()) {
      if (std::abs(upto - len) > 1e-9 * std::max(1.0, len)) throw GraphError("last potential piece must end at the edge length");
      upto = len;
    }
    if (!(upto > pw.breaks.back())) throw GraphError("potential breakpoints must be strictly increasing");
    pw.breaks.push_back(upto);
    pw.values.push_back(p.value);
  }
  edges_.at(static_cast<std::size_t>(edge)) = std::move(pw);
  return *this;
}

Potential Potential::shifted(double c) const {
  if (!(c >= 0.0)) throw GraphError("potential shift must be nonnegative");
  Potential out = *this;
  for (auto& pw : out.edges_)
    for (auto& v : pw.values) v += c;
  return out;
}

double Potential::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& pw : edges_) m = std::min(m, pw.min_value());
  return m;
}

double evaluate(const MetricGraph& g, const Potential& v, const Point& p) {
  if (!g.is_valid(p)) throw GraphError("invalid point");
  if (!p.is_vertex()) return v.on_edge(p.edge).at(p.offset);
  const auto ends = g.incident(p.vertex);
  const auto first = std::min_element(ends.begin(), ends.end(),
                                      [](const EdgeEnd& a, const EdgeEnd& b) { return a.edge < b.edge; });
  const Piecewise& pw = v.on_edge(first->edge);
  return pw.at(first->at_end ? pw.breaks.back() : 0.0);
}

RestrictedPotential restrict(const Potential& v, const Subgraph& s) {
  RestrictedPotential out;
  const MetricGraph& g = s.graph();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Piecewise& pw = v.on_edge(static_cast<int>(e));
    for (const auto& piece : s.pieces(static_cast<int>(e))) {
      Piecewise local;
      local.breaks.push_back(0.0);
      for (std::size_t i = 0; i < pw.values.size(); ++i) {
        const double a = std::max(piece.lo, pw.breaks[i]);
        const double b = std::min(piece.hi, pw.breaks[i + 1]);
        if (b <= a) continue;
        local.breaks.push_back(b - piece.lo);
        local.values.push_back(pw.values[i]);
      }
      local.breaks.back() = piece.length();
      out.segments.push_back({static_cast<int>(e), piece, std::move(local)});
    }
  }
  return out;
}

double integrate(const Potential& v, const Subgraph& s) {
  double sum = 0.0;
  const MetricGraph& g = s.graph();
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& piece : s.pieces(static_cast<int>(e))) sum += v.on_edge(static_cast<int>(e)).integral(piece.lo, piece.hi);
  return sum;
}

double integrate(const RestrictedPotential& v) {
  double sum = 0.0;
  for (const auto& seg : v.segments) sum += seg.local.integral();
  return sum;
}

}  // namespace qgraph
