#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "qgraph/asymptotics.hpp"
#include "qgraph/gallery.hpp"
#include "qgraph/zones.hpp"

namespace qgraph {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

void record(CaseContext& c, CaseCheck check) { c.checks.push_back(std::move(check)); }

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> r;
  const int n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) r.push_back(lo + step * i);
  return r;
}

void interval_oracle(CaseContext& c) {
  const MetricGraph g = make_interval(1.0, true);
  const auto gs = ground_energy(Subgraph::whole(g), Potential::zero(g), 1e-3);
  c.near_relative("lambda", gs.lambda_extrapolated, pi2, 1e-6, "pi^2");
  const MetricGraph half = make_interval(1.0, false);
  const Subgraph mixed(half, {{{0.0, 1.0}}}, {half.vertex_point(1)});
  c.near_relative("lambda mixed ends", ground_energy(mixed, Potential::zero(half), 1e-2).lambda_extrapolated,
                  pi2 / 4.0, 1e-6, "pi^2/4");
}

void cycle_ball_jump(CaseContext& c) {
  const MetricGraph g = make_cycle(1.0);
  const Potential v = Potential::zero(g);
  const Point x = g.vertex_point(0);
  ScanOptions o;
  o.h = 0.01;
  const auto scan = radius_scan(g, v, x, grid(0.05, 0.45, 0.05), ScanDirection::ball, o);
  for (const auto& s : scan.samples)
    c.near_relative("ball R=" + format_number(s.radius), s.lambda, pi2 / (4.0 * s.radius * s.radius), 1e-3,
                    "pi^2/(4R^2)");
  const auto whole = radius_scan(g, v, x, {0.5, 0.6}, ScanDirection::ball, o);
  for (const auto& s : whole.samples) c.near("ball R=" + format_number(s.radius), s.lambda, 0.0, 1e-8, "constant mode");
  const auto dense = grid(0.1, 0.7, 0.01);
  const auto ball_report = continuity_scan(g, v, x, ScanDirection::ball, dense, o);
  c.near("ball jumps", static_cast<double>(ball_report.jumps.size()), 1.0, 0.0, "single jump at R = 1/2");
  if (!ball_report.jumps.empty())
    c.near("jump location", ball_report.jumps.front().r_right, 0.5, 0.01 + 1e-9, "R = 1/2");
  const auto ext_report = continuity_scan(g, v, x, ScanDirection::exterior, grid(0.05, 0.49, 0.01), o);
  c.near("exterior jumps", static_cast<double>(ext_report.jumps.size()), 0.0, 0.0, "continuous exterior energy");
}

void tree_threshold(CaseContext& c) {
  const double t2 = tree_theta(2) * tree_theta(2);
  double previous = INFINITY;
  for (int depth : {6, 8, 10, 12}) {
    const MetricGraph g = make_tree(2, depth);
    const double lambda = ground_energy(Subgraph::whole(g), Potential::zero(g), 0.25).lambda_extrapolated;
    c.holds("depth " + std::to_string(depth) + " decreasing", lambda < previous, "nested truncations");
    c.holds("depth " + std::to_string(depth) + " above threshold", lambda >= t2, "truncation bracket");
    previous = lambda;
    if (depth == 12) c.near("depth 12", lambda, t2, 5e-2, "arccos(2/(sqrt2+1/sqrt2))^2");
  }
}

void half_line_rings(CaseContext& c) {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  for (double target : {pi2, 4.0 * pi2}) {
    const auto rp = build_equipartition_rings(g, v, g.vertex_point(0), target, 5, 0.0);
    for (const auto& r : rp.rings) {
      const std::string tag = "target " + format_number(target) + " ring " + std::to_string(r.index);
      c.near(tag + " width", r.r_outer - r.r_inner, pi / std::sqrt(target), 1e-3, "pi/sqrt(lambda)");
      c.near_relative(tag + " energy", r.lambda, target, 1e-3, "target");
    }
  }
}

void interval_minmax(CaseContext& c) {
  const MetricGraph g = make_interval(1.0, false);
  const Potential v = Potential::zero(g);
  OptimizeOptions o;
  o.h = 0.02;
  const auto r2 = optimize_k(g, v, 2, o);
  c.near_relative("k=2 energy", r2.report.energy, pi2, 1e-2, "pi^2/(4 (1/2)^2)");
  const auto r3 = optimize_k(g, v, 3, o);
  c.near_relative("k=3 energy", r3.report.energy, 4.0 * pi2, 1e-2, "quarters");
  std::vector<double> cuts;
  for (const auto& p : r3.partition.cuts)
    if (!p.is_vertex()) cuts.push_back(p.offset);
  std::sort(cuts.begin(), cuts.end());
  c.near("k=3 cut count", static_cast<double>(cuts.size()), 2.0, 0.0, "two interior cuts");
  if (cuts.size() == 2) {
    c.near("k=3 first cut", cuts[0], 0.25, 1e-3, "1/4");
    c.near("k=3 second cut", cuts[1], 0.75, 1e-3, "3/4");
  }
}

void star_rays(CaseContext& c) {
  const double len = 10.0;
  const MetricGraph g = make_star(3, len);
  OptimizeOptions o;
  o.h = 0.5;
  const auto r = optimize_k(g, Potential::zero(g), 3, o);
  c.near_relative("k=3 energy", r.report.energy, pi2 / (4.0 * len * len), 1e-2, "pi^2/(4L^2)");
  c.holds("valid partition", validate(r.partition).ok(), "partition invariants");
}

void glued_tree_star(CaseContext& c) {
  const int k = 3;
  const MetricGraph g = make_glued_tree_star(2, 6, k);
  const Potential v = Potential::zero(g);
  const double t2 = tree_theta(2) * tree_theta(2);
  const auto ev = eigenvalues_below(Subgraph::whole(g), v, 0.25, k);
  c.at_most("lambda_1 <= lambda_2", ev[0].lambda_extrapolated, ev[1].lambda_extrapolated, 1e-8, "interlacing");
  for (int j = 1; j < k; ++j)
    c.near("lambda_" + std::to_string(j + 1), ev[static_cast<std::size_t>(j)].lambda_extrapolated, t2, 1e-2,
           "theta^2");
  Partition intervals;
  const Point centre = g.vertex_point(0);
  for (std::size_t e = g.edge_count() - k; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    intervals.clusters.emplace_back(g, [&] {
      std::vector<std::vector<Interval>> p(g.edge_count());
      p[e] = {{0.0, g.edge(ei).length}};
      return p;
    }(), std::vector<Point>{centre});
  }
  intervals.cuts = {centre};
  const auto rep = energy(intervals, v, 0.05);
  c.near("interval partition", rep.energy, t2, 1e-2, "theta^2");
  OptimizeOptions o;
  o.h = 0.25;
  o.max_candidate_edges = 5;
  o.max_cuts_per_edge = 1;
  const auto best = optimize_k(g, v, k, o);
  c.holds("no probe below interval partition", best.report.energy >= rep.energy - 1e-2, "minimality");
}

void branch_cut_tree(CaseContext& c) {
  const double t2 = tree_theta(2) * tree_theta(2);
  double previous = INFINITY;
  for (int depth : {6, 8, 10}) {
    const MetricGraph g = make_tree(2, depth);
    const Partition p = branch_cut_partition(g, 2);
    c.holds("depth " + std::to_string(depth) + " valid", validate(p).ok(), "partition invariants");
    const double e = energy(p, Potential::zero(g), 0.25).energy;
    c.holds("depth " + std::to_string(depth) + " decreasing", e < previous, "nested truncations");
    c.holds("depth " + std::to_string(depth) + " above threshold", e >= t2, "truncation bracket");
    previous = e;
  }
}

void compact_lead(CaseContext& c) {
  const double bar = 2.0 * pi2;
  GraphSpec compact;
  compact.vertices = {0, 1};
  compact.edges = {{0, 0, 1, 1.0}};
  const LeadGraph lg = make_compact_plus_lead(compact, 1, 100.0, bar);
  OptimizeOptions o;
  o.h = 0.25;
  o.spectral.min_cells = 8;
  for (int j : {1, 2}) {
    const auto r = optimize_k(lg.graph, lg.potential, j, o);
    c.at_most("j=" + std::to_string(j) + " energy", r.report.energy, bar, 0.0, "lead potential");
  }
  SigmaOptions so;
  so.scan.h = 0.25;
  so.scan.spectral.min_cells = 8;
  const Point root = lg.graph.vertex_point(lg.junction);
  const auto sigma = sigma_estimate(lg.graph, lg.potential, root, default_radii(lg.graph, root), so);
  c.holds("threshold estimate above lead potential", sigma.lower >= bar - 1e-6, "truncation bracket");
}

void line_threshold(CaseContext& c) {
  const MetricGraph g = make_line(100.0);
  const Potential v = Potential::zero(g);
  const Point root = g.vertex_point(1);
  ExistenceOptions eo;
  eo.sigma.scan.h = 0.5;
  eo.optimize.h = 0.5;
  eo.optimize.root_vertex = 1;
  const auto verdict = classify_existence(g, v, 2, root, eo);
  c.near("sigma estimate", verdict.sigma.lower, 0.0, 1e-2, "zero threshold");
  c.near("k=2 energy", verdict.best_energy, 0.0, 1e-3, "zero energy pair of rays");
  c.holds("k=2 boundary case", verdict.classification == Existence::boundary_case, "energy equals threshold");
}

void constant_lead_threshold(CaseContext& c) {
  const double bar = 3.0;
  const MetricGraph g = make_half_line(200.0);
  const Potential v = Potential::constant(g, bar);
  SigmaOptions so;
  so.scan.h = 0.5;
  const Point root = g.vertex_point(0);
  const auto sigma = sigma_estimate(g, v, root, default_radii(g, root), so);
  for (const auto& t : sigma.trend) c.holds("R=" + format_number(t.radius) + " above", t.lambda >= bar, "bracket");
  c.near("sigma estimate", sigma.lower, bar, 1e-2, "constant potential");
}

void nicaise_bounds(CaseContext& c) {
  const MetricGraph g = make_interval(1.0, false);
  const Potential v = Potential::zero(g);
  const Subgraph one(g, {{{0.0, 1.0}}}, {g.vertex_point(1)});
  const Subgraph two(g, {{{0.0, 1.0}}}, {g.vertex_point(0), g.vertex_point(1)});
  for (const auto* s : {&one, &two}) {
    const auto gs = ground_energy(*s, v, 0.01);
    c.at_most("bound", nicaise_bound(*s), gs.lambda_extrapolated + 2.0 * gs.error_indicator, 1e-9, "pi^2/(4 vol^2)");
  }
  c.near_relative("tight case", nicaise_bound(one), pi2 / 4.0, 1e-12, "pi^2/4");
}

}  // namespace

void CaseContext::near(const std::string& name, double value, double expected, double tolerance,
                       const std::string& source) {
  record(*this, {name, value, expected, tolerance, source, std::abs(value - expected) <= tolerance});
}

void CaseContext::near_relative(const std::string& name, double value, double expected, double tolerance,
                                const std::string& source) {
  record(*this, {name, value, expected, tolerance, source,
                 std::abs(value - expected) <= tolerance * std::abs(expected)});
}

void CaseContext::at_most(const std::string& name, double value, double bound, double tolerance,
                          const std::string& source) {
  record(*this, {name, value, bound, tolerance, source, value <= bound + tolerance});
}

void CaseContext::holds(const std::string& name, bool condition, const std::string& source) {
  record(*this, {name, condition ? 1.0 : 0.0, 1.0, 0.0, source, condition});
}

const std::vector<GalleryCase>& gallery_cases() {
  static const std::vector<GalleryCase> cases = {
      {"interval_oracle", "Dirichlet and mixed unit intervals", interval_oracle},
      {"cycle_ball_jump", "ball energies on the unit cycle and the jump at R = 1/2", cycle_ball_jump},
      {"tree_threshold", "truncated binary trees approach theta^2 from above", tree_threshold},
      {"half_line_rings", "equal-energy rings on the half-line", half_line_rings},
      {"interval_minmax", "optimal 2- and 3-partitions of the free unit interval", interval_minmax},
      {"star_rays", "3-partition of a 3-star into its rays", star_rays},
      {"glued_tree_star", "binary tree with matched pendant intervals", glued_tree_star},
      {"branch_cut_tree", "vertex cuts of the binary tree", branch_cut_tree},
      {"compact_lead", "unit interval glued to a lead with constant potential", compact_lead},
      {"line_threshold", "pair of rays: zero energy equals the zero threshold", line_threshold},
      {"constant_lead_threshold", "threshold estimate under a constant potential", constant_lead_threshold},
      {"nicaise_bounds", "volume lower bounds on intervals", nicaise_bounds},
  };
  return cases;
}

CaseReport run_case(const GalleryCase& c) {
  CaseReport r;
  r.name = c.name;
  CaseContext ctx;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.body(ctx);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks = std::move(ctx.checks);
  r.passed = r.error.empty() && !r.checks.empty() &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const CaseCheck& k) { return k.passed; });
  return r;
}

std::vector<CaseReport> run_gallery(const std::string& selection, Execution execution) {
  std::vector<const GalleryCase*> chosen;
  for (const auto& c : gallery_cases())
    if (selection == "all" || selection == c.name) chosen.push_back(&c);
  if (chosen.empty()) throw GraphError("unknown gallery case: " + selection);
  std::vector<CaseReport> out(chosen.size());
  for_each_index(chosen.size(), execution, [&](std::size_t i) { out[i] = run_case(*chosen[i]); });
  return out;
}

}  // namespace qgraph
