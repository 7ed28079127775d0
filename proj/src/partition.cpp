#include "qgraph/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

namespace qgraph {

double EnergyReport::summed_error() const {
  double s = 0.0;
  for (const auto& c : clusters) s += c.error_indicator;
  return s;
}

double EnergyReport::max_error() const {
  double s = 0.0;
  for (const auto& c : clusters) s = std::max(s, c.error_indicator);
  return s;
}

ClusterEnergy cluster_energy(const Subgraph& s, const Potential& v, double h, const SpectralOptions& options) {
  const GroundStateResult gs = ground_energy(s, v, h, options);
  return {gs.lambda_extrapolated, gs.lambda_h, gs.error_indicator};
}

namespace {

EnergyReport summarize(std::vector<ClusterEnergy> energies) {
  EnergyReport r;
  r.clusters = std::move(energies);
  r.energy = -INFINITY;
  for (std::size_t i = 0; i < r.clusters.size(); ++i) {
    if (r.clusters[i].lambda > r.energy) {
      r.energy = r.clusters[i].lambda;
      r.argmax = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < r.clusters.size(); ++i)
    if (std::abs(r.clusters[i].lambda - r.energy) <= 1e-9 * std::max(1.0, std::abs(r.energy)))
      r.ties.push_back(static_cast<int>(i));
  return r;
}

}  // namespace

EnergyReport energy(const Partition& p, const Potential& v, double h, const SpectralOptions& options,
                    Execution execution) {
  if (p.clusters.empty()) throw PartitionError("partition has no clusters");
  std::vector<ClusterEnergy> e(p.clusters.size());
  for_each_index(p.clusters.size(), execution, [&](std::size_t i) { e[i] = cluster_energy(p.clusters[i], v, h, options); });
  return summarize(std::move(e));
}

Diagnostics validate(const Partition& p) {
  Diagnostics d;
  const std::size_t n = p.clusters.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Subgraph& c = p.clusters[i];
    const std::string name = "cluster " + std::to_string(i);
    if (c.is_empty()) {
      d.violations.push_back(name + " is empty");
      continue;
    }
    if (c.component_count() != 1)
      d.violations.push_back(name + " has " + std::to_string(c.component_count()) + " components");
    for (const auto& cut : p.cuts)
      if (c.contains(cut) && !c.is_dirichlet(cut)) d.violations.push_back(name + " contains a cut point in its interior");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Subgraph& a = p.clusters[i];
      const Subgraph& b = p.clusters[j];
      if (a.is_empty() || b.is_empty()) continue;
      const std::string pair = "clusters " + std::to_string(i) + " and " + std::to_string(j);
      if (!intersect(a, b).is_empty()) d.violations.push_back(pair + " overlap");
      const MetricGraph& g = a.graph();
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        const Point pt = g.vertex_point(static_cast<int>(v));
        if (a.contains(pt) && b.contains(pt) && !(a.is_dirichlet(pt) && b.is_dirichlet(pt)))
          d.violations.push_back(pair + " share a non-boundary vertex");
      }
      for (std::size_t e = 0; e < g.edge_count(); ++e)
        for (const auto& pa : a.pieces(static_cast<int>(e)))
          for (const auto& pb : b.pieces(static_cast<int>(e)))
            for (double x : {pa.lo, pa.hi})
              if ((x == pb.lo || x == pb.hi) && x > 0.0 && x < g.edge(static_cast<int>(e)).length) {
                const Point pt{-1, static_cast<int>(e), x};
                if (!(a.is_dirichlet(pt) && b.is_dirichlet(pt)))
                  d.violations.push_back(pair + " share a non-boundary point");
              }
    }
  }
  return d;
}

std::vector<Subgraph> cut_components(const MetricGraph& g, const std::vector<Point>& cuts) {
  return components(Subgraph::whole(g, cuts));
}

namespace {

using Score = std::vector<double>;  // selected cluster energies, descending

// Lexicographic comparison of descending energy lists: the largest energy
// decides, the next ones break ties.
bool better(const Score& a, const Score& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::isinf(a[i]) && std::isinf(b[i])) continue;
    const double tol = 1e-12 * std::max(1.0, std::abs(b[i]));
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return false;
}

std::string region_key(const Subgraph& s) {
  std::string key;
  char buf[64];
  const auto& all = s.all_pieces();
  for (std::size_t e = 0; e < all.size(); ++e)
    for (const auto& p : all[e]) {
      std::snprintf(buf, sizeof buf, "%zu:%.17g:%.17g;", e, p.lo, p.hi);
      key += buf;
    }
  key += '|';
  for (const auto& b : s.boundary()) {
    std::snprintf(buf, sizeof buf, "%d:%d:%.17g;", b.vertex, b.edge, b.offset);
    key += buf;
  }
  return key;
}

class Evaluator {
 public:
  struct State {
    std::vector<Point> cuts;
    std::vector<Subgraph> comps;
    std::vector<ClusterEnergy> energies;  // per component, empty when too few
    std::vector<int> selected;            // component indices, by (lambda, first edge)
    Score score;
  };

  Evaluator(const MetricGraph& g, const Potential& v, int k, const OptimizeOptions& o, std::vector<int> cut_edge)
      : g_(g), v_(v), k_(k), o_(o), cut_edge_(std::move(cut_edge)) {}

  State evaluate(const std::vector<double>& offsets) {
    ++evaluations;
    State s;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const Point p = g_.point_on_edge(cut_edge_[j], offsets[j]);
      if (std::find(s.cuts.begin(), s.cuts.end(), p) == s.cuts.end()) s.cuts.push_back(p);
    }
    s.comps = cut_components(g_, s.cuts);
    if (static_cast<int>(s.comps.size()) < k_) {
      s.score.assign(static_cast<std::size_t>(k_), INFINITY);
      return s;
    }
    s.energies.reserve(s.comps.size());
    for (const auto& c : s.comps) s.energies.push_back(lookup(c));
    std::vector<int> order(s.comps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return s.energies[static_cast<std::size_t>(a)].lambda < s.energies[static_cast<std::size_t>(b)].lambda;
    });
    s.selected.assign(order.begin(), order.begin() + k_);
    for (int i : s.selected) s.score.push_back(s.energies[static_cast<std::size_t>(i)].lambda);
    std::sort(s.score.rbegin(), s.score.rend());
    return s;
  }

  long evaluations = 0;

 private:
  ClusterEnergy lookup(const Subgraph& c) {
    const std::string key = region_key(c);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const ClusterEnergy e = cluster_energy(c, v_, o_.h, o_.spectral);
    cache_.emplace(key, e);
    return e;
  }

  const MetricGraph& g_;
  const Potential& v_;
  int k_;
  const OptimizeOptions& o_;
  std::vector<int> cut_edge_;
  std::unordered_map<std::string, ClusterEnergy> cache_;
};

// Component index containing the piece of edge e that ends (left) or starts
// (right) at offset t, or -1.
int adjacent_component(const std::vector<Subgraph>& comps, int e, double t, bool left) {
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (const auto& p : comps[i].pieces(e))
      if ((left && p.hi == t) || (!left && p.lo == t)) return static_cast<int>(i);
  return -1;
}

struct Bounds {
  double lo;
  double hi;
};

class TopologySearch {
 public:
  TopologySearch(const MetricGraph& g, const Potential& v, int k, const OptimizeOptions& o,
                 const std::vector<int>& edges, const std::vector<int>& counts)
      : g_(g), o_(o), eval_(g, v, k, o, expand(edges, counts)) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double len = g.edge(edges[i]).length;
      for (int c = 1; c <= counts[i]; ++c) {
        offsets_.push_back(len * c / (counts[i] + 1));
        cut_edge_.push_back(edges[i]);
      }
    }
  }

  Evaluator::State run() {
    state_ = eval_.evaluate(offsets_);
    if (std::isinf(state_.score.front()) || offsets_.empty()) return state_;
    for (int round = 0; round < o_.descent_sweeps; ++round) {
      const bool moved = descent_sweep();
      const bool equalized = equalize();
      if (!moved && !equalized) break;
    }
    return state_;
  }

  [[nodiscard]] long evaluations() const { return eval_.evaluations; }

 private:
  static std::vector<int> expand(const std::vector<int>& edges, const std::vector<int>& counts) {
    std::vector<int> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (int c = 0; c < counts[i]; ++c) out.push_back(edges[i]);
    return out;
  }

  Bounds bounds(std::size_t j) const {
    Bounds b{0.0, g_.edge(cut_edge_[j]).length};
    if (j > 0 && cut_edge_[j - 1] == cut_edge_[j]) b.lo = offsets_[j - 1];
    if (j + 1 < offsets_.size() && cut_edge_[j + 1] == cut_edge_[j]) b.hi = offsets_[j + 1];
    return b;
  }

  Evaluator::State probe(std::size_t j, double t) {
    std::vector<double> trial = offsets_;
    trial[j] = t;
    return eval_.evaluate(trial);
  }

  void accept(std::size_t j, double t, Evaluator::State s) {
    offsets_[j] = t;
    state_ = std::move(s);
  }

  // Golden-section line search on one offset, endpoints included.
  bool line_search(std::size_t j) {
    const Bounds b = bounds(j);
    if (!(b.hi > b.lo)) return false;
    const double tol = o_.offset_tolerance * g_.edge(cut_edge_[j]).length;
    double best_t = offsets_[j];
    Evaluator::State best = state_;
    auto consider = [&](double t, Evaluator::State s) {
      if (better(s.score, best.score)) {
        best = std::move(s);
        best_t = t;
      }
    };
    consider(b.lo, probe(j, b.lo));
    consider(b.hi, probe(j, b.hi));

    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = b.lo;
    double c = b.hi;
    double x1 = c - r * (c - a);
    double x2 = a + r * (c - a);
    Evaluator::State f1 = probe(j, x1);
    Evaluator::State f2 = probe(j, x2);
    while (c - a > tol) {
      if (better(f2.score, f1.score)) {
        consider(x1, std::move(f1));
        a = x1;
        x1 = x2;
        f1 = std::move(f2);
        x2 = a + r * (c - a);
        f2 = probe(j, x2);
      } else {
        consider(x2, std::move(f2));
        c = x2;
        x2 = x1;
        f2 = std::move(f1);
        x1 = c - r * (c - a);
        f1 = probe(j, x1);
      }
    }
    consider(x1, std::move(f1));
    consider(x2, std::move(f2));
    if (best_t == offsets_[j]) return false;
    accept(j, best_t, std::move(best));
    return true;
  }

  bool descent_sweep() {
    bool moved = false;
    for (int sweep = 0; sweep < o_.descent_sweeps; ++sweep) {
      bool any = false;
      for (std::size_t j = 0; j < offsets_.size(); ++j) any = line_search(j) || any;
      moved = moved || any;
      if (!any) break;
    }
    return moved;
  }

  // Energy difference of the two selected clusters on either side of cut j,
  // or NaN when the cut does not separate two selected clusters.
  double side_gap(const Evaluator::State& s, std::size_t j, double t) const {
    if (s.energies.empty()) return NAN;
    const int e = cut_edge_[j];
    const int l = adjacent_component(s.comps, e, t, true);
    const int r = adjacent_component(s.comps, e, t, false);
    if (l < 0 || r < 0 || l == r) return NAN;
    const auto sel = [&](int c) { return std::find(s.selected.begin(), s.selected.end(), c) != s.selected.end(); };
    if (!sel(l) || !sel(r)) return NAN;
    return s.energies[static_cast<std::size_t>(l)].lambda - s.energies[static_cast<std::size_t>(r)].lambda;
  }

  // Bisection of each separating cut until its two clusters balance.
  bool equalize() {
    bool changed = false;
    for (int sweep = 0; sweep < o_.equalize_sweeps; ++sweep) {
      bool balanced = true;
      bool any = false;
      for (std::size_t j = 0; j < offsets_.size(); ++j) {
        const double gap = side_gap(state_, j, offsets_[j]);
        if (std::isnan(gap)) continue;
        const double scale = std::max(std::abs(state_.score.front()), 1e-300);
        if (std::abs(gap) <= o_.equalize_tolerance * scale) continue;
        balanced = false;
        // the left cluster shrinks as the cut moves left, so its energy rises
        Bounds b = bounds(j);
        double lo = gap > 0.0 ? offsets_[j] : b.lo;
        double hi = gap > 0.0 ? b.hi : offsets_[j];
        Evaluator::State cand;
        double t = offsets_[j];
        bool found = false;
        for (int it = 0; it < 60 && hi - lo > o_.offset_tolerance * g_.edge(cut_edge_[j]).length; ++it) {
          t = 0.5 * (lo + hi);
          cand = probe(j, t);
          const double gt = side_gap(cand, j, t);
          if (std::isnan(gt)) break;
          found = true;
          if (std::abs(gt) <= 0.1 * o_.equalize_tolerance * scale) break;
          (gt > 0.0 ? lo : hi) = t;
        }
        if (!found) continue;
        if (cand.score.front() <= state_.score.front() * (1.0 + 1e-12)) {
          accept(j, t, std::move(cand));
          any = true;
          changed = true;
        }
      }
      if (balanced || !any) break;
    }
    return changed;
  }

  const MetricGraph& g_;
  const OptimizeOptions& o_;
  Evaluator eval_;
  std::vector<double> offsets_;
  std::vector<int> cut_edge_;
  Evaluator::State state_;
};

OptimizeResult to_result(const Evaluator::State& s, int k) {
  OptimizeResult r;
  if (s.energies.empty()) {
    r.report.energy = INFINITY;
    return r;
  }
  std::vector<int> chosen = s.selected;
  std::sort(chosen.begin(), chosen.end());
  std::vector<ClusterEnergy> e;
  for (int i : chosen) {
    r.partition.clusters.push_back(s.comps[static_cast<std::size_t>(i)]);
    e.push_back(s.energies[static_cast<std::size_t>(i)]);
  }
  r.partition.cuts = s.cuts;
  r.partition.exhaustive = static_cast<int>(s.comps.size()) == k;
  r.report = summarize(std::move(e));
  return r;
}

std::vector<int> nearest_edges(const MetricGraph& g, const OptimizeOptions& o) {
  if (!o.candidate_edges.empty()) {
    for (int e : o.candidate_edges)
      if (e < 0 || e >= static_cast<int>(g.edge_count())) throw PartitionError("candidate edge out of range");
    return o.candidate_edges;
  }
  if (o.root_vertex < 0 || o.root_vertex >= static_cast<int>(g.vertex_count()))
    throw PartitionError("root vertex out of range");
  const auto d = vertex_distances(g, g.vertex_point(o.root_vertex));
  std::vector<int> idx(g.edge_count());
  std::iota(idx.begin(), idx.end(), 0);
  auto near = [&](int e) {
    const Edge& ed = g.edge(e);
    return std::min(d[static_cast<std::size_t>(ed.from)], d[static_cast<std::size_t>(ed.to)]);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return near(a) < near(b); });
  if (static_cast<int>(idx.size()) > o.max_candidate_edges) idx.resize(static_cast<std::size_t>(o.max_candidate_edges));
  std::sort(idx.begin(), idx.end());
  return idx;
}

void enumerate(std::size_t pos, int remaining, int per_edge, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (pos == cur.size()) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c <= std::min(remaining, per_edge); ++c) {
    cur[pos] = c;
    enumerate(pos + 1, remaining - c, per_edge, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

OptimizeResult optimize_topology(const MetricGraph& g, const Potential& v, int k, const std::vector<int>& candidate_edges,
                                 const std::vector<int>& counts, const OptimizeOptions& options) {
  if (k < 1) throw PartitionError("k must be positive");
  if (counts.size() != candidate_edges.size()) throw PartitionError("one cut count per candidate edge required");
  TopologySearch search(g, v, k, options, candidate_edges, counts);
  const Evaluator::State s = search.run();
  OptimizeResult r = to_result(s, k);
  r.topology = counts;
  r.candidate_edges = candidate_edges;
  r.topologies_evaluated = 1;
  r.evaluations = search.evaluations();
  return r;
}

OptimizeResult optimize_k(const MetricGraph& g, const Potential& v, int k, const OptimizeOptions& options) {
  if (k < 1) throw PartitionError("k must be positive");
  const int max_cuts = options.max_cuts < 0 ? k + 2 : options.max_cuts;
  const std::vector<int> edges = nearest_edges(g, options);
  const int per_edge = options.max_cuts_per_edge < 0 ? max_cuts : options.max_cuts_per_edge;

  std::vector<std::vector<int>> topologies;
  std::vector<int> cur(edges.size(), 0);
  enumerate(0, max_cuts, per_edge, cur, topologies);
  std::stable_sort(topologies.begin(), topologies.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
  });

  std::vector<OptimizeResult> results(topologies.size());
  for_each_index(topologies.size(), options.execution, [&](std::size_t i) {
    results[i] = optimize_topology(g, v, k, edges, topologies[i], options);
  });

  OptimizeResult best;
  best.report.energy = INFINITY;
  long evals = 0;
  int usable = 0;
  Score best_score;
  for (auto& r : results) {
    evals += r.evaluations;
    if (std::isinf(r.report.energy)) continue;
    ++usable;
    Score sc;
    for (const auto& c : r.report.clusters) sc.push_back(c.lambda);
    std::sort(sc.rbegin(), sc.rend());
    if (best_score.empty() || better(sc, best_score)) {
      best_score = sc;
      best = std::move(r);
    }
  }
  if (usable == 0)
    throw PartitionError("no cut topology with at most " + std::to_string(max_cuts) + " cuts yields " +
                         std::to_string(k) + " components");
  best.topologies_evaluated = static_cast<int>(topologies.size());
  best.evaluations = evals;
  return best;
}

const char* to_string(Existence e) {
  switch (e) {
    case Existence::exists_certified: return "exists_certified";
    case Existence::boundary_case: return "boundary_case";
    case Existence::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double existence_margin(const ExistenceOptions& options, const SigmaBracket& sigma, const EnergyReport& report) {
  return std::max({options.margin_absolute, options.margin_relative * std::abs(sigma.lower),
                   2.0 * (report.summed_error() + sigma.summed_error())});
}

Existence classify(double best_energy, double sigma_lower, double margin) {
  if (best_energy < sigma_lower - margin) return Existence::exists_certified;
  if (std::abs(best_energy - sigma_lower) <= margin) return Existence::boundary_case;
  return Existence::inconclusive;
}

ExistenceVerdict classify_existence(const MetricGraph& g, const Potential& v, int k, const Point& root,
                                    const ExistenceOptions& options) {
  ExistenceVerdict out;
  out.k = k;
  const std::vector<double> radii =
      options.radii.empty() ? default_radii(g, root, 8, options.sigma.scan.truncation_margin) : options.radii;
  out.sigma = sigma_estimate(g, v, root, radii, options.sigma);
  OptimizeResult best = optimize_k(g, v, k, options.optimize);
  out.best_energy = best.report.energy;
  out.witness = std::move(best.partition);
  out.report = std::move(best.report);
  out.margin = existence_margin(options, out.sigma, out.report);
  out.classification = classify(out.best_energy, out.sigma.lower, out.margin);
  return out;
}

}  // namespace qgraph
