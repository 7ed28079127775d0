#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace qgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snap_eps(double length) { return 1e-12 * std::max(1.0, length); }

bool point_less(const Point& a, const Point& b) {
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  if (a.edge != b.edge) return a.edge < b.edge;
  return a.offset < b.offset;
}

// Clip to [0, length], snap near-ends, sort, merge overlaps and drop pieces of
// (numerically) zero length. Pieces that merely touch are merged unless the
// touching offset is listed in `keep_apart`.
std::vector<Interval> normalize(std::vector<Interval> pieces, double length,
                                const std::vector<double>& keep_apart = {}) {
  const double eps = snap_eps(length);
  for (auto& p : pieces) {
    p.lo = std::clamp(p.lo, 0.0, length);
    p.hi = std::clamp(p.hi, 0.0, length);
    if (p.lo < eps) p.lo = 0.0;
    if (p.hi > length - eps) p.hi = length;
  }
  std::erase_if(pieces, [&](const Interval& p) { return p.hi - p.lo <= eps; });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& p : pieces) {
    if (!out.empty()) {
      auto& last = out.back();
      const bool overlaps = p.lo < last.hi - eps;
      const bool touches = !overlaps && p.lo <= last.hi + eps;
      const bool separated = touches && std::any_of(keep_apart.begin(), keep_apart.end(),
                                                    [&](double x) { return std::abs(x - last.hi) <= eps; });
      if (overlaps || (touches && !separated)) {
        last.hi = std::max(last.hi, p.hi);
        continue;
      }
      if (touches) {
        // snap to a common point
        out.push_back({last.hi, p.hi});
        continue;
      }
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Interval> intersect_sets(const std::vector<Interval>& a, const std::vector<Interval>& b,
                                     double length) {
  std::vector<Interval> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push_back({lo, hi});
    }
  }
  return normalize(std::move(out), length);
}

// Distance along an edge is the minimum of at most three affine branches.
struct EdgeDistance {
  double from_start = kInf;  // d(from) + s
  double from_end = kInf;    // d(to) + length - s
  bool has_center = false;   // |s - t| when the center lies on the edge
  double center = 0.0;
};

EdgeDistance edge_distance(const MetricGraph& g, const std::vector<double>& vd, const Point& c, int e) {
  const Edge& ed = g.edge(e);
  EdgeDistance d;
  d.from_start = vd[static_cast<std::size_t>(ed.from)];
  d.from_end = vd[static_cast<std::size_t>(ed.to)];
  if (!c.is_vertex() && c.edge == e) {
    d.has_center = true;
    d.center = c.offset;
  }
  return d;
}

// {s : dist(s) <= r}
std::vector<Interval> sublevel(const EdgeDistance& d, double length, double r) {
  std::vector<Interval> out;
  if (r >= d.from_start) out.push_back({0.0, r - d.from_start});
  if (r >= d.from_end) out.push_back({length - (r - d.from_end), length});
  if (d.has_center) out.push_back({d.center - r, d.center + r});
  return normalize(std::move(out), length);
}

// {s : dist(s) >= r}, the closure of the complement of the open ball.
std::vector<Interval> superlevel(const EdgeDistance& d, double length, double r) {
  std::vector<Interval> out{{0.0, length}};
  if (std::isfinite(d.from_start)) out = intersect_sets(out, {{r - d.from_start, length}}, length);
  if (std::isfinite(d.from_end)) out = intersect_sets(out, {{0.0, length - (r - d.from_end)}}, length);
  if (d.has_center) {
    out = intersect_sets(out, normalize({{0.0, d.center - r}, {d.center + r, length}}, length), length);
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

struct PieceRef {
  int edge;
  std::size_t index;
};

// Groups the pieces of a region into connected components. Pieces meet at
// vertices; vertices where `splits` holds keep them apart.
template <class Splits>
std::vector<int> label_pieces(const MetricGraph& g, const std::vector<std::vector<Interval>>& pieces,
                              std::vector<PieceRef>& refs, Splits splits) {
  refs.clear();
  for (std::size_t e = 0; e < pieces.size(); ++e)
    for (std::size_t i = 0; i < pieces[e].size(); ++i) refs.push_back({static_cast<int>(e), i});
  UnionFind uf(refs.size());
  std::vector<int> owner(g.vertex_count(), -1);
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const auto& ref = refs[k];
    const Edge& ed = g.edge(ref.edge);
    const Interval& p = pieces[static_cast<std::size_t>(ref.edge)][ref.index];
    auto touch = [&](int v) {
      if (splits(v)) return;
      auto& o = owner[static_cast<std::size_t>(v)];
      if (o < 0)
        o = static_cast<int>(k);
      else
        uf.join(o, static_cast<int>(k));
    };
    if (p.lo == 0.0) touch(ed.from);
    if (p.hi == ed.length) touch(ed.to);
  }
  std::vector<int> label(refs.size());
  for (std::size_t k = 0; k < refs.size(); ++k) label[k] = uf.find(static_cast<int>(k));
  return label;
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricGraph

MetricGraph MetricGraph::build(const GraphSpec& spec) {
  MetricGraph g;
  g.spec_ = spec;
  if (spec.vertices.empty()) throw GraphError("graph has no vertices");
  if (spec.edges.empty()) throw GraphError("graph has no edges");

  std::unordered_map<int, int> vindex;
  for (int id : spec.vertices) {
    if (!vindex.emplace(id, static_cast<int>(g.vertex_ids_.size())).second)
      throw GraphError("duplicate vertex id " + std::to_string(id));
    g.vertex_ids_.push_back(id);
  }
  auto lookup = [&](int id, const char* what) {
    auto it = vindex.find(id);
    if (it == vindex.end()) throw GraphError(std::string("unknown vertex id ") + std::to_string(id) + " in " + what);
    return it->second;
  };

  std::unordered_set<int> edge_ids;
  g.incident_.resize(g.vertex_ids_.size());
  for (const auto& es : spec.edges) {
    if (!edge_ids.insert(es.id).second) throw GraphError("duplicate edge id " + std::to_string(es.id));
    if (!std::isfinite(es.length) || es.length <= 0.0)
      throw GraphError("edge " + std::to_string(es.id) + " has nonpositive or non-finite length");
    Edge e{es.id, lookup(es.from, "edge"), lookup(es.to, "edge"), es.length};
    const int index = static_cast<int>(g.edges_.size());
    g.edges_.push_back(e);
    g.incident_[static_cast<std::size_t>(e.from)].push_back({index, false});
    g.incident_[static_cast<std::size_t>(e.to)].push_back({index, true});
  }

  g.dirichlet_.assign(g.vertex_ids_.size(), false);
  for (int id : spec.dirichlet_vertices) g.dirichlet_[static_cast<std::size_t>(lookup(id, "dirichlet_vertices"))] = true;
  for (const auto& t : spec.truncated_ends) g.truncated_.push_back({lookup(t.vertex, "truncated_ends"), t.tag});

  // connectivity
  std::vector<bool> seen(g.vertex_ids_.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& end : g.incident_[static_cast<std::size_t>(v)]) {
      const Edge& e = g.edges_[static_cast<std::size_t>(end.edge)];
      const int w = end.at_end ? e.from : e.to;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != g.vertex_ids_.size()) throw GraphError("graph is disconnected");
  return g;
}

int MetricGraph::vertex_index(int id) const {
  auto it = std::find(vertex_ids_.begin(), vertex_ids_.end(), id);
  return it == vertex_ids_.end() ? -1 : static_cast<int>(it - vertex_ids_.begin());
}

int MetricGraph::edge_index(int id) const {
  auto it = std::find_if(edges_.begin(), edges_.end(), [id](const Edge& e) { return e.id == id; });
  return it == edges_.end() ? -1 : static_cast<int>(it - edges_.begin());
}

double MetricGraph::total_length() const {
  return std::accumulate(edges_.begin(), edges_.end(), 0.0, [](double s, const Edge& e) { return s + e.length; });
}

Point MetricGraph::vertex_point(int vertex) const {
  if (vertex < 0 || static_cast<std::size_t>(vertex) >= vertex_ids_.size()) throw GraphError("invalid vertex index");
  return Point{vertex, -1, 0.0};
}

Point MetricGraph::point_on_edge(int edge, double offset) const {
  if (edge < 0 || static_cast<std::size_t>(edge) >= edges_.size()) throw GraphError("invalid edge index");
  const Edge& e = edges_[static_cast<std::size_t>(edge)];
  const double eps = snap_eps(e.length);
  if (!(offset >= -eps && offset <= e.length + eps)) throw GraphError("offset outside edge");
  if (offset <= eps) return Point{e.from, -1, 0.0};
  if (offset >= e.length - eps) return Point{e.to, -1, 0.0};
  return Point{-1, edge, offset};
}

bool MetricGraph::is_valid(const Point& p) const {
  if (p.is_vertex()) return p.edge < 0 && static_cast<std::size_t>(p.vertex) < vertex_ids_.size();
  if (p.edge < 0 || static_cast<std::size_t>(p.edge) >= edges_.size()) return false;
  return p.offset > 0.0 && p.offset < edges_[static_cast<std::size_t>(p.edge)].length;
}

// ---------------------------------------------------------------------------
// distances

std::vector<double> vertex_distances(const MetricGraph& g, const Point& from) {
  if (!g.is_valid(from)) throw GraphError("invalid point");
  std::vector<double> dist(g.vertex_count(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  auto relax = [&](int v, double d) {
    if (d < dist[static_cast<std::size_t>(v)]) {
      dist[static_cast<std::size_t>(v)] = d;
      queue.emplace(d, v);
    }
  };
  if (from.is_vertex()) {
    relax(from.vertex, 0.0);
  } else {
    const Edge& e = g.edge(from.edge);
    relax(e.from, from.offset);
    relax(e.to, e.length - from.offset);
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const auto& end : g.incident(v)) {
      const Edge& e = g.edge(end.edge);
      relax(end.at_end ? e.from : e.to, d + e.length);
    }
  }
  return dist;
}

double distance(const MetricGraph& g, const Point& p, const Point& q) {
  if (!g.is_valid(q)) throw GraphError("invalid point");
  const auto vd = vertex_distances(g, p);
  if (q.is_vertex()) return vd[static_cast<std::size_t>(q.vertex)];
  const Edge& e = g.edge(q.edge);
  double d = std::min(vd[static_cast<std::size_t>(e.from)] + q.offset,
                      vd[static_cast<std::size_t>(e.to)] + e.length - q.offset);
  if (!p.is_vertex() && p.edge == q.edge) d = std::min(d, std::abs(p.offset - q.offset));
  return d;
}

double eccentricity(const MetricGraph& g, const Point& from) {
  const auto vd = vertex_distances(g, from);
  double best = 0.0;
  // points inside an edge may be farther than both endpoints
  for (const Edge& e : g.edges()) {
    const double a = vd[static_cast<std::size_t>(e.from)];
    const double b = vd[static_cast<std::size_t>(e.to)];
    best = std::max(best, 0.5 * (a + b + e.length));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Subgraph

Subgraph::Subgraph(const MetricGraph& g, std::vector<std::vector<Interval>> pieces, std::vector<Point> marks)
    : graph_(&g), pieces_(std::move(pieces)), marks_(std::move(marks)) {
  if (pieces_.size() != g.edge_count()) throw GraphError("subgraph piece table does not match edge count");
  for (const auto& m : marks_)
    if (!g.is_valid(m)) throw GraphError("invalid Dirichlet mark");
  for (std::size_t e = 0; e < pieces_.size(); ++e) {
    std::vector<double> cuts;
    for (const auto& m : marks_)
      if (!m.is_vertex() && m.edge == static_cast<int>(e)) cuts.push_back(m.offset);
    // a mark inside a piece splits it
    std::vector<Interval> split;
    for (const auto& p : pieces_[e]) {
      std::vector<double> at{p.lo};
      for (double c : cuts)
        if (c > p.lo && c < p.hi) at.push_back(c);
      at.push_back(p.hi);
      std::sort(at.begin(), at.end());
      for (std::size_t i = 0; i + 1 < at.size(); ++i) split.push_back({at[i], at[i + 1]});
    }
    pieces_[e] = normalize(std::move(split), g.edge(static_cast<int>(e)).length, cuts);
  }
  std::erase_if(marks_, [&](const Point& m) { return !contains(m); });
  std::sort(marks_.begin(), marks_.end(), point_less);
  marks_.erase(std::unique(marks_.begin(), marks_.end()), marks_.end());
  finalize();
}

Subgraph Subgraph::whole(const MetricGraph& g, std::vector<Point> marks) {
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) pieces[e] = {{0.0, g.edge(static_cast<int>(e)).length}};
  return Subgraph(g, std::move(pieces), std::move(marks));
}

Subgraph Subgraph::empty(const MetricGraph& g) { return Subgraph(g, std::vector<std::vector<Interval>>(g.edge_count())); }

bool Subgraph::is_empty() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.empty(); });
}

std::size_t Subgraph::piece_count() const {
  std::size_t n = 0;
  for (const auto& p : pieces_) n += p.size();
  return n;
}

bool Subgraph::contains_vertex(int vertex) const {
  for (const auto& end : graph_->incident(vertex)) {
    const auto& ps = pieces_[static_cast<std::size_t>(end.edge)];
    if (ps.empty()) continue;
    if (!end.at_end && ps.front().lo == 0.0) return true;
    if (end.at_end && ps.back().hi == graph_->edge(end.edge).length) return true;
  }
  return false;
}

bool Subgraph::contains(const Point& p) const {
  if (p.is_vertex()) return contains_vertex(p.vertex);
  for (const auto& piece : pieces_[static_cast<std::size_t>(p.edge)])
    if (p.offset >= piece.lo && p.offset <= piece.hi) return true;
  return false;
}

bool Subgraph::is_dirichlet(const Point& p) const {
  return std::find(boundary_.begin(), boundary_.end(), p) != boundary_.end();
}

bool Subgraph::splits_at(int vertex) const {
  if (graph_->is_dirichlet_vertex(vertex)) return true;
  return std::any_of(marks_.begin(), marks_.end(), [&](const Point& m) { return m.vertex == vertex; });
}

int Subgraph::first_edge() const {
  for (std::size_t e = 0; e < pieces_.size(); ++e)
    if (!pieces_[e].empty()) return static_cast<int>(e);
  return -1;
}

void Subgraph::finalize() {
  const MetricGraph& g = *graph_;
  boundary_.clear();
  for (std::size_t e = 0; e < pieces_.size(); ++e) {
    const double len = g.edge(static_cast<int>(e)).length;
    for (const auto& p : pieces_[e]) {
      if (p.lo > 0.0) boundary_.push_back(Point{-1, static_cast<int>(e), p.lo});
      if (p.hi < len) boundary_.push_back(Point{-1, static_cast<int>(e), p.hi});
    }
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const int vi = static_cast<int>(v);
    if (!contains_vertex(vi)) continue;
    bool dirichlet = splits_at(vi);
    for (const auto& end : g.incident(vi)) {
      const auto& ps = pieces_[static_cast<std::size_t>(end.edge)];
      const bool covered = !ps.empty() && (end.at_end ? ps.back().hi == g.edge(end.edge).length : ps.front().lo == 0.0);
      if (!covered) dirichlet = true;
    }
    if (dirichlet) boundary_.push_back(Point{vi, -1, 0.0});
  }
  std::sort(boundary_.begin(), boundary_.end(), point_less);
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());

  std::vector<PieceRef> refs;
  const auto label = label_pieces(g, pieces_, refs, [&](int v) { return splits_at(v); });
  std::unordered_set<int> roots(label.begin(), label.end());
  component_count_ = static_cast<int>(roots.size());
}

// ---------------------------------------------------------------------------
// balls, exteriors, annuli

Subgraph ball(const MetricGraph& g, const Point& center, double radius) {
  if (!(radius > 0.0)) throw GraphError("ball radius must be positive");
  const auto vd = vertex_distances(g, center);
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    pieces[e] = sublevel(edge_distance(g, vd, center, ei), g.edge(ei).length, radius);
  }
  return Subgraph(g, std::move(pieces));
}

Subgraph exterior(const MetricGraph& g, const Point& center, double radius) {
  if (!(radius > 0.0)) throw GraphError("exterior radius must be positive");
  const auto vd = vertex_distances(g, center);
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    pieces[e] = superlevel(edge_distance(g, vd, center, ei), g.edge(ei).length, radius);
  }
  return Subgraph(g, std::move(pieces));
}

Subgraph annulus(const MetricGraph& g, const Point& center, double r1, double r2) {
  if (!(r1 > 0.0) || !(r1 < r2)) throw GraphError("annulus requires 0 < r1 < r2");
  const auto vd = vertex_distances(g, center);
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    const double len = g.edge(ei).length;
    const auto d = edge_distance(g, vd, center, ei);
    pieces[e] = intersect_sets(sublevel(d, len, r2), superlevel(d, len, r1), len);
  }
  return Subgraph(g, std::move(pieces));
}

Subgraph intersect(const Subgraph& a, const Subgraph& b) {
  const MetricGraph& g = a.graph();
  std::vector<std::vector<Interval>> pieces(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    const auto pa = a.pieces(ei);
    const auto pb = b.pieces(ei);
    pieces[e] = intersect_sets({pa.begin(), pa.end()}, {pb.begin(), pb.end()}, g.edge(ei).length);
  }
  std::vector<Point> marks(a.marks().begin(), a.marks().end());
  marks.insert(marks.end(), b.marks().begin(), b.marks().end());
  return Subgraph(g, std::move(pieces), std::move(marks));
}

bool is_subset(const Subgraph& inner, const Subgraph& outer) {
  const MetricGraph& g = inner.graph();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const double eps = snap_eps(g.edge(static_cast<int>(e)).length);
    for (const auto& p : inner.pieces(static_cast<int>(e))) {
      const auto outer_pieces = outer.pieces(static_cast<int>(e));
      const bool inside = std::any_of(outer_pieces.begin(), outer_pieces.end(), [&](const Interval& q) {
        return q.lo <= p.lo + eps && p.hi <= q.hi + eps;
      });
      if (!inside) return false;
    }
  }
  return true;
}

std::vector<Subgraph> components(const Subgraph& s) {
  const MetricGraph& g = s.graph();
  std::vector<PieceRef> refs;
  const auto label = label_pieces(g, s.all_pieces(), refs, [&](int v) { return s.splits_at(v); });
  std::vector<int> order;  // component roots in order of first appearance
  for (int l : label)
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  std::vector<Subgraph> out;
  out.reserve(order.size());
  for (int root : order) {
    std::vector<std::vector<Interval>> pieces(g.edge_count());
    for (std::size_t k = 0; k < refs.size(); ++k)
      if (label[k] == root)
        pieces[static_cast<std::size_t>(refs[k].edge)].push_back(s.pieces(refs[k].edge)[refs[k].index]);
    std::vector<Point> marks(s.marks().begin(), s.marks().end());
    out.emplace_back(g, std::move(pieces), std::move(marks));
  }
  return out;
}

double volume(const Subgraph& s) {
  double v = 0.0;
  for (const auto& ps : s.all_pieces())
    for (const auto& p : ps) v += p.length();
  return v;
}

}  // namespace qgraph
