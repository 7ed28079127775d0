#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgraph/asymptotics.hpp"
#include "qgraph/gallery.hpp"
#include "qgraph/partition.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/zones.hpp"

using namespace qgraph;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += buf;
    }
  }
  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += buf;
  }
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent closed forms.
double dirichlet_interval(double len) { return pi * pi / (len * len); }
double mixed_interval(double len) { return pi * pi / (4.0 * len * len); }
double tree_threshold_b2() { return std::asin(1.0 / 3.0) * std::asin(1.0 / 3.0); }
double free_interval_minmax(int k) { return pi * pi * (k - 1) * (k - 1); }

GraphSpec unit_interval_spec() {
  GraphSpec s;
  s.vertices = {0, 1};
  s.edges = {{0, 0, 1, 1.0}};
  return s;
}

Outcome interval_oracle() {
  Outcome out;
  const MetricGraph g = make_interval(1.0, true);
  const auto t0 = std::chrono::steady_clock::now();
  const GroundStateResult r = ground_energy(Subgraph::whole(g), Potential::zero(g), 1e-3);
  const double elapsed = seconds_since(t0);
  const double rel = std::abs(r.lambda_extrapolated - pi * pi) / (pi * pi);
  out.require(rel <= 1e-6, "relative error %.3g > 1e-6", rel);
  out.require(elapsed < 2.0, "runtime %.2f s >= 2 s", elapsed);
  out.note("lambda=%.12g rel.err=%.2g solve=%.2fs", r.lambda_extrapolated, rel, elapsed);
  return out;
}

Outcome cycle_ball_scan() {
  Outcome out;
  const MetricGraph g = make_cycle(1.0);
  const Potential v = Potential::zero(g);
  const double step = 0.05;
  std::vector<double> radii;
  for (int i = 1; i <= 10; ++i) radii.push_back(step * i);
  radii.push_back(0.6);
  ScanOptions o;
  o.h = 0.01;
  const ContinuityReport rep = continuity_scan(g, v, g.vertex_point(0), ScanDirection::ball, radii, o);
  double worst = 0.0;
  for (const auto& s : rep.scan.samples) {
    if (s.radius < 0.5 - 1e-12) {
      const double rel = std::abs(s.lambda - mixed_interval(s.radius)) / mixed_interval(s.radius);
      worst = std::max(worst, rel);
      out.require(rel <= 1e-3, "R=%.2f relative error %.3g", s.radius, rel);
    } else {
      out.require(std::abs(s.lambda) < 1e-8, "R=%.2f |lambda|=%.3g", s.radius, std::abs(s.lambda));
    }
  }
  out.require(rep.jumps.size() == 1, "%zu jumps flagged", rep.jumps.size());
  if (rep.jumps.size() == 1) {
    const Jump& j = rep.jumps[0];
    const bool at_half = std::abs(j.r_right - 0.5) <= step + 1e-12 && std::abs(j.r_left - 0.5) <= step + 1e-12;
    out.require(at_half, "jump between %.3f and %.3f", j.r_left, j.r_right);
    out.note("jump (%.2f, %.2f]", j.r_left, j.r_right);
  }
  out.note("max rel.err %.2g", worst);
  return out;
}

Outcome tree_threshold() {
  Outcome out;
  const double theta2 = tree_threshold_b2();
  double previous = INFINITY;
  double last = 0.0;
  for (int depth : {6, 8, 10, 12}) {
    const MetricGraph t = make_tree(2, depth);
    const double l = ground_energy(Subgraph::whole(t), Potential::zero(t), 0.25).lambda_extrapolated;
    out.require(l < previous, "depth %d: %.6g not below %.6g", depth, l, previous);
    out.require(l >= theta2, "depth %d: %.6g below theta^2", depth, l);
    previous = l;
    last = l;
  }
  out.require(std::abs(last - theta2) <= 5e-2, "depth 12 gap %.4g", last - theta2);
  out.note("depth 12: %.6g, theta^2=%.6g", last, theta2);
  return out;
}

struct SuiteGraph {
  std::string name;
  MetricGraph graph;
  Potential potential;
  Point root;
  OptimizeOptions optimize;
  double sigma_h;
};

std::vector<SuiteGraph> bound_suite() {
  std::vector<SuiteGraph> s;
  {
    MetricGraph g = make_line(100.0);
    OptimizeOptions o;
    o.h = 0.5;
    o.root_vertex = 1;
    s.push_back({"line", g, Potential::zero(g), g.vertex_point(1), o, 0.5});
  }
  {
    MetricGraph g = make_star(3, 10.0);
    OptimizeOptions o;
    o.h = 0.5;
    s.push_back({"3-star", g, Potential::zero(g), g.vertex_point(0), o, 0.5});
  }
  {
    MetricGraph g = make_tree(2, 5);
    OptimizeOptions o;
    o.h = 0.25;
    o.max_candidate_edges = 4;
    o.max_cuts_per_edge = 1;
    s.push_back({"tree", g, Potential::zero(g), g.vertex_point(0), o, 0.25});
  }
  {
    LeadGraph lead = make_compact_plus_lead(unit_interval_spec(), 1, 20.0, 2.0 * pi * pi);
    OptimizeOptions o;
    o.h = 0.25;
    o.root_vertex = lead.junction;
    o.spectral.min_cells = 8;
    s.push_back({"compact+lead", lead.graph, lead.potential, lead.graph.vertex_point(lead.junction), o, 0.25});
  }
  return s;
}

Outcome upper_bound_suite() {
  Outcome out;
  for (const SuiteGraph& sg : bound_suite()) {
    SigmaOptions so;
    so.scan.h = sg.sigma_h;
    const SigmaBracket sigma = sigma_estimate(sg.graph, sg.potential, sg.root, default_radii(sg.graph, sg.root), so);
    for (int k = 1; k <= 3; ++k) {
      const OptimizeResult r = optimize_k(sg.graph, sg.potential, k, sg.optimize);
      const double slack = 2.0 * (r.report.summed_error() + sigma.summed_error());
      out.require(validate(r.partition).ok(), "%s k=%d invalid witness", sg.name.c_str(), k);
      out.require(r.report.energy <= sigma.lower + slack, "%s k=%d: %.6g > %.6g + %.3g", sg.name.c_str(), k,
                  r.report.energy, sigma.lower, slack);
      if (k == 3) out.note("%s: L3=%.5g sigma=%.5g", sg.name.c_str(), r.report.energy, sigma.lower);
    }
  }
  return out;
}

Outcome ticket_zones() {
  Outcome out;
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const Point root = g.vertex_point(0);
  SigmaOptions so;
  so.scan.h = 0.05;
  const double sigma = sigma_estimate(g, v, root, default_radii(g, root), so).lower;
  ZoneOptions zo;
  zo.h = 0.02;
  for (double lambda : {pi * pi, 4.0 * pi * pi}) {
    const RingPartition rp = build_equipartition_rings(g, v, root, lambda, 5, sigma, zo);
    const double width = pi / std::sqrt(lambda);
    double worst_w = 0.0;
    double worst_e = 0.0;
    out.require(rp.rings.size() == 5, "lambda=%.4g: %zu rings", lambda, rp.rings.size());
    for (const Ring& r : rp.rings) {
      const double dw = std::abs(r.r_outer - r.r_inner - width);
      const double de = std::abs(r.lambda - lambda) / lambda;
      worst_w = std::max(worst_w, dw);
      worst_e = std::max(worst_e, de);
      out.require(dw <= 1e-3, "lambda=%.4g ring %d width off by %.3g", lambda, r.index, dw);
      out.require(de <= 1e-3, "lambda=%.4g ring %d energy rel.err %.3g", lambda, r.index, de);
    }
    out.require(validate(rp.partition).ok(), "lambda=%.4g rings not a valid partition", lambda);
    out.note("lambda/pi^2=%g width err %.2g energy err %.2g", lambda / (pi * pi), worst_w, worst_e);
  }
  return out;
}

Outcome minmax_optimizer() {
  Outcome out;
  {
    const MetricGraph g = make_interval(1.0, false);
    OptimizeOptions o;
    o.h = 0.02;
    const OptimizeResult r = optimize_k(g, Potential::zero(g), 3, o);
    std::vector<double> x;
    for (const Point& c : r.partition.cuts) x.push_back(c.is_vertex() ? -1.0 : c.offset);
    std::sort(x.begin(), x.end());
    out.require(x.size() == 2, "%zu cuts on the interval", x.size());
    if (x.size() == 2) {
      out.require(std::abs(x[0] - 0.25) <= 1e-3 && std::abs(x[1] - 0.75) <= 1e-3, "cuts at %.6f, %.6f", x[0], x[1]);
      out.note("cuts %.6f %.6f", x[0], x[1]);
    }
    const double rel = std::abs(r.report.energy - 4.0 * pi * pi) / (4.0 * pi * pi);
    out.require(rel <= 1e-2, "interval energy rel.err %.3g", rel);
  }
  {
    const MetricGraph g = make_star(3, 10.0);
    OptimizeOptions o;
    o.h = 0.5;
    const OptimizeResult r = optimize_k(g, Potential::zero(g), 3, o);
    const double expected = mixed_interval(10.0);
    const double rel = std::abs(r.report.energy - expected) / expected;
    out.require(rel <= 1e-2, "star energy %.6g rel.err %.3g", r.report.energy, rel);
    out.note("star L3=%.6g (rel.err %.2g)", r.report.energy, rel);
  }
  return out;
}

Outcome glued_tree_star() {
  Outcome out;
  const int k = 3;
  const double theta2 = tree_threshold_b2();
  const MetricGraph g = make_glued_tree_star(2, 5, k);
  const Potential v = Potential::zero(g);
  const double h = 0.25;
  SpectralOptions so;
  so.min_cells = 8;
  const auto ev = eigenvalues_below(Subgraph::whole(g), v, h, k, so);
  for (int j = 1; j < k; ++j) {
    const double l = ev[static_cast<std::size_t>(j)].lambda_extrapolated;
    out.require(std::abs(l - theta2) <= 1e-2, "lambda_%d=%.8g vs theta^2 %.8g", j + 1, l, theta2);
  }
  out.require(ev[0].lambda_extrapolated <= ev[1].lambda_extrapolated + so.eigen.tolerance * (1.0 + ev[1].lambda_extrapolated),
              "lambda_1=%.8g above lambda_2", ev[0].lambda_extrapolated);

  const int first_pendant = static_cast<int>(g.edge_count()) - k;
  Partition intervals;
  intervals.cuts = {g.vertex_point(0)};
  for (const Subgraph& c : cut_components(g, intervals.cuts))
    if (c.first_edge() >= first_pendant) intervals.clusters.push_back(c);
  const EnergyReport base = energy(intervals, v, h, so);
  out.require(intervals.clusters.size() == static_cast<std::size_t>(k), "%zu interval clusters",
              intervals.clusters.size());
  out.require(std::abs(base.energy - theta2) <= 1e-2, "interval partition energy %.8g", base.energy);

  // Moving any cut into a pendant shortens that interval.
  int beaten = 0;
  for (int e = first_pendant; e < first_pendant + k; ++e)
    for (double delta : {1e-3, 1e-2, 0.1, 0.5}) {
      Partition probe;
      probe.cuts = {g.point_on_edge(e, delta)};
      for (int f = first_pendant; f < first_pendant + k; ++f)
        if (f != e) probe.cuts.push_back(g.point_on_edge(f, 0.0));
      std::vector<Subgraph> comps = cut_components(g, probe.cuts);
      for (const Subgraph& c : comps)
        if (c.first_edge() >= first_pendant) probe.clusters.push_back(c);
      if (probe.clusters.size() == static_cast<std::size_t>(k) &&
          energy(probe, v, h, so).energy < base.energy - 2.0 * base.summed_error())
        ++beaten;
    }
  out.require(beaten == 0, "%d perturbed probes beat the interval partition", beaten);

  OptimizeOptions o;
  o.h = h;
  o.spectral = so;
  o.max_candidate_edges = 5;
  o.max_cuts_per_edge = 1;
  const OptimizeResult r = optimize_k(g, v, k, o);
  out.require(r.report.energy >= base.energy - 2.0 * (base.summed_error() + r.report.summed_error()),
              "optimizer found %.8g below %.8g", r.report.energy, base.energy);
  out.note("lambda=%.6g,%.8g,%.8g theta^2=%.8g; intervals %.8g; search %.8g over %d topologies",
           ev[0].lambda_extrapolated, ev[1].lambda_extrapolated, ev[2].lambda_extrapolated, theta2, base.energy,
           r.report.energy, r.topologies_evaluated);
  return out;
}

struct PropertyGraph {
  std::string name;
  MetricGraph graph;
  Potential potential;
  double h;
};

std::vector<PropertyGraph> property_graphs() {
  std::vector<PropertyGraph> out;
  const auto add = [&](std::string name, MetricGraph g, Potential v, double h) {
    out.push_back({std::move(name), std::move(g), std::move(v), h});
  };
  {
    MetricGraph g = make_line(10.0);
    add("line", g, Potential::zero(g), 0.1);
  }
  {
    MetricGraph g = make_star(3, 10.0);
    add("3-star", g, Potential::zero(g), 0.1);
  }
  {
    MetricGraph g = make_cycle(1.0);
    add("cycle", g, Potential::zero(g), 0.01);
  }
  {
    MetricGraph g = make_tree(2, 6);
    add("tree", g, Potential::zero(g), 0.25);
  }
  {
    MetricGraph g = make_half_line(30.0);
    add("half-line", g, Potential::zero(g), 0.1);
  }
  {
    MetricGraph g = make_interval(1.0, true);
    add("interval", g, Potential::zero(g), 0.01);
  }
  {
    MetricGraph g = make_glued_tree_star(2, 4, 3);
    add("glued", g, Potential::zero(g), 0.25);
  }
  {
    LeadGraph l = make_compact_plus_lead(unit_interval_spec(), 1, 20.0, 2.0 * pi * pi);
    add("compact+lead", l.graph, l.potential, 0.1);
  }
  return out;
}

Point random_point(const MetricGraph& g, std::mt19937& rng) {
  std::uniform_int_distribution<int> edge(0, static_cast<int>(g.edge_count()) - 1);
  const int e = edge(rng);
  std::uniform_real_distribution<double> off(0.0, g.edge(e).length);
  return g.point_on_edge(e, off(rng));
}

Subgraph random_region(const MetricGraph& g, std::mt19937& rng) {
  const Point c = random_point(g, rng);
  const double ecc = eccentricity(g, c);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      return Subgraph::whole(g);
    case 1:
      return ball(g, c, unit(rng) * ecc);
    case 2:
      return exterior(g, c, unit(rng) * ecc);
    default: {
      double a = unit(rng) * ecc;
      double b = unit(rng) * ecc;
      if (a > b) std::swap(a, b);
      return annulus(g, c, a, std::max(b, a + 0.05 * ecc));
    }
  }
}

Outcome monotonicity_and_shift() {
  Outcome out;
  std::mt19937 rng(20240611u);
  int pairs_total = 0;
  for (const PropertyGraph& pg : property_graphs()) {
    const MetricGraph& g = pg.graph;
    int pairs = 0;
    int attempts = 0;
    int violations = 0;
    while (pairs < 50 && attempts < 5000) {
      ++attempts;
      const Subgraph outer = random_region(g, rng);
      if (outer.is_empty()) continue;
      const Point c = random_point(g, rng);
      const double r = std::uniform_real_distribution<double>(0.05, 1.0)(rng) * eccentricity(g, c);
      const Subgraph inner = intersect(outer, ball(g, c, r));
      if (inner.is_empty() || volume(inner) < 4.0 * pg.h) continue;
      if (!is_subset(inner, outer)) {
        ++violations;
        continue;
      }
      const GroundStateResult a = ground_energy(inner, pg.potential, pg.h);
      const GroundStateResult b = ground_energy(outer, pg.potential, pg.h);
      if (a.lambda_extrapolated < b.lambda_extrapolated - 2.0 * (a.error_indicator + b.error_indicator)) ++violations;
      ++pairs;
    }
    pairs_total += pairs;
    out.require(pairs == 50, "%s: only %d nested pairs", pg.name.c_str(), pairs);
    out.require(violations == 0, "%s: %d monotonicity violations", pg.name.c_str(), violations);

    const Subgraph whole = Subgraph::whole(g);
    const Subgraph region = ball(g, random_point(g, rng), 0.5 * eccentricity(g, g.vertex_point(0)));
    for (const Subgraph* s : {&whole, &region}) {
      if (s->is_empty()) continue;
      const GroundStateResult base = ground_energy(*s, pg.potential, pg.h);
      for (double c : {0.25, 1.0, 7.5}) {
        const GroundStateResult shifted = ground_energy(*s, pg.potential.shifted(c), pg.h);
        const double d1 = std::abs(shifted.lambda_h - base.lambda_h - c);
        const double d2 = std::abs(shifted.lambda_extrapolated - base.lambda_extrapolated - c);
        out.require(d1 <= 1e-10 && d2 <= 1e-10, "%s: shift %.2f off by %.3g / %.3g", pg.name.c_str(), c, d1, d2);
      }
    }
  }
  out.note("%d nested pairs checked", pairs_total);
  return out;
}

Outcome lead_threshold() {
  Outcome out;
  const double lambda_bar = 2.0 * pi * pi;

  // k from the compact part alone.
  const MetricGraph compact = MetricGraph::build(unit_interval_spec());
  OptimizeOptions co;
  co.h = 0.01;
  int k = 0;
  std::vector<double> lk;
  for (int j = 1; j <= 4; ++j) {
    const double e = optimize_k(compact, Potential::zero(compact), j, co).report.energy;
    lk.push_back(e);
    out.require(std::abs(e - free_interval_minmax(j)) <= 1e-2 * std::max(1.0, free_interval_minmax(j)),
                "compact L%d=%.6g vs %.6g", j, e, free_interval_minmax(j));
  }
  for (int j = 1; j < 4; ++j)
    if (lk[static_cast<std::size_t>(j - 1)] <= lambda_bar && lambda_bar < lk[static_cast<std::size_t>(j)]) k = j;
  out.require(k == 2, "k=%d", k);
  const int leads = 1;
  const int j_far = k + leads + 2;

  const LeadGraph lead = make_compact_plus_lead(unit_interval_spec(), 1, 100.0, lambda_bar);
  OptimizeOptions o;
  o.h = 0.25;
  o.root_vertex = lead.junction;
  o.spectral.min_cells = 8;
  for (int j : {1, 2}) {
    const OptimizeResult r = optimize_k(lead.graph, lead.potential, j, o);
    out.require(r.report.energy <= lambda_bar, "j=%d energy %.8g above lambda_bar", j, r.report.energy);
    out.require(validate(r.partition).ok(), "j=%d invalid witness", j);
    out.note("j=%d: %.6g", j, r.report.energy);
  }
  const OptimizeResult far = optimize_k(lead.graph, lead.potential, j_far, o);
  const double gap = far.report.energy - lambda_bar;
  out.require(std::abs(gap) <= 1e-2, "j=%d energy %.8g differs from lambda_bar by %.3g", j_far, far.report.energy, gap);
  out.require(far.report.energy >= lambda_bar - 1e-2, "j=%d energy below lambda_bar - 1e-2", j_far);
  out.note("k=%d; j=%d: E-lambda_bar=%.3g", k, j_far, gap);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "interval oracle", interval_oracle},
      {2, "cycle ball scan and jump", cycle_ball_scan},
      {3, "homogeneous tree threshold", tree_threshold},
      {4, "partition energy below the threshold estimate", upper_bound_suite},
      {5, "ticket-zone rings", ticket_zones},
      {6, "min-max optimizer", minmax_optimizer},
      {7, "glued tree and intervals", glued_tree_star},
      {8, "monotonicity and shift covariance", monotonicity_and_shift},
      {9, "compact graph with a lead", lead_threshold},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s (%.1f s) | %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
