#include "qgraph/zones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qgraph/asymptotics.hpp"

namespace qgraph {

namespace {

double radius_tolerance(const MetricGraph& g, const Point& root, const ZoneOptions& o) {
  return o.radius_tolerance_factor * std::max(eccentricity(g, root), 1e-300);
}

void require_above_sigma(double target, double sigma_lower) {
  if (!(target > sigma_lower))
    throw ZoneError("target " + format_number(target) + " does not exceed the threshold estimate " +
                    format_number(sigma_lower));
}

struct Selection {
  Subgraph cluster;
  ClusterEnergy energy;
  int index = 0;
  int count = 0;
};

Selection lowest_component(const Subgraph& s, const Potential& v, const ZoneOptions& o) {
  const auto comps = components(s);
  Selection best;
  best.count = static_cast<int>(comps.size());
  best.energy.lambda = INFINITY;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const ClusterEnergy e = cluster_energy(comps[i], v, o.h, o.spectral);
    // components come ordered by lowest edge, so earlier ones win ties
    if (i == 0 || e.lambda < best.energy.lambda - 1e-9 * std::max(1.0, std::abs(best.energy.lambda))) {
      best.cluster = comps[i];
      best.energy = e;
      best.index = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

double annulus_energy(const MetricGraph& g, const Potential& v, const Point& root, double r1, double r2,
                      const ZoneOptions& options) {
  const Subgraph a = annulus(g, root, r1, r2);
  if (a.is_empty()) return INFINITY;
  return ground_energy(a, v, options.h, options.spectral).lambda_extrapolated;
}

double find_outer_radius(const MetricGraph& g, const Potential& v, const Point& root, double r1, double target,
                         double sigma_lower, const ZoneOptions& options) {
  require_above_sigma(target, sigma_lower);
  if (!(r1 > 0.0)) throw ZoneError("inner radius must be positive");
  const double cap = admissible_radius(g, root, options.truncation_margin);
  if (!(r1 < cap)) throw ZoneError("inner radius beyond the admissible truncation radius " + format_number(cap));
  const double tol = radius_tolerance(g, root, options);

  double w = 0.5 * std::numbers::pi / std::sqrt(target);
  double lo = r1;
  double hi = 0.0;
  for (int step = 0;; ++step) {
    const double r3 = std::min(r1 + w, cap);
    const double e = annulus_energy(g, v, root, r1, r3, options);
    if (step == 0 && std::abs(e - target) <= options.first_probe_tolerance * target) return r3;
    if (e <= target) {
      hi = r3;
      break;
    }
    lo = r3;
    if (r3 >= cap || step >= options.max_steps)
      throw ZoneError("truncation too small to certify: energy " + format_number(e) + " at radius " +
                      format_number(r3) + " still above target");
    w *= 2.0;
  }
  for (int step = 0; hi - lo > tol && step < options.max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    (annulus_energy(g, v, root, r1, mid, options) <= target ? hi : lo) = mid;
  }
  return hi;
}

double equalize_inner_radius(const MetricGraph& g, const Potential& v, const Point& root, double r3, double target,
                             double r1, const ZoneOptions& options) {
  if (!(r1 > 0.0) || !(r1 < r3)) throw ZoneError("equalization requires 0 < R1 < R3");
  const double band = options.energy_tolerance * target;
  const double e1 = annulus_energy(g, v, root, r1, r3, options);
  if (e1 > target + band)
    throw ZoneError("annulus energy " + format_number(e1) + " at R1 already exceeds the target");
  if (std::abs(e1 - target) <= band) return r1;

  const double tol = radius_tolerance(g, root, options);
  double lo = r1;
  double hi = r3;
  double elo = e1;
  double ehi = INFINITY;
  for (int step = 0; hi - lo > tol && step < options.max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double e = annulus_energy(g, v, root, mid, r3, options);
    if (std::abs(e - target) <= 1e-2 * band) return mid;
    if (e <= target) {
      lo = mid;
      elo = e;
    } else {
      hi = mid;
      ehi = e;
    }
  }
  if (std::abs(elo - target) <= band) return lo;
  if (std::abs(ehi - target) <= band) return hi;
  throw ZoneError("bisection failed to bracket the target: energies " + format_number(elo) + " at " +
                  format_number(lo) + " and " + format_number(ehi) + " at " + format_number(hi));
}

double find_ball_radius(const MetricGraph& g, const Potential& v, const Point& root, double target,
                        const ZoneOptions& options) {
  if (!(target > 0.0)) throw ZoneError("target must be positive");
  const double cap = admissible_radius(g, root, options.truncation_margin);
  const double tol = radius_tolerance(g, root, options);
  auto energy_at = [&](double r) { return ground_energy(ball(g, root, r), v, options.h, options.spectral).lambda_extrapolated; };

  double r = std::min(0.25 * std::numbers::pi / std::sqrt(target), cap);
  double lo = 0.0;
  for (int step = 0;; ++step) {
    if (energy_at(r) <= target) break;
    lo = r;
    if (r >= cap || step >= options.max_steps)
      throw ZoneError("no ball within the admissible radius reaches the target energy");
    r = std::min(2.0 * r, cap);
  }
  double hi = r;
  for (int step = 0; hi - lo > tol && step < options.max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    (energy_at(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

RingPartition build_equipartition_rings(const MetricGraph& g, const Potential& v, const Point& root, double target,
                                        int count, double sigma_lower, const ZoneOptions& options,
                                        std::optional<double> start_radius) {
  require_above_sigma(target, sigma_lower);
  if (count < 1) throw ZoneError("ring count must be positive");
  double r = start_radius ? *start_radius : find_ball_radius(g, v, root, target, options);
  RingPartition out;
  for (int i = 0; i < count; ++i) {
    double r3 = 0.0;
    try {
      r3 = find_outer_radius(g, v, root, r, target, sigma_lower, options);
    } catch (const ZoneError& e) {
      throw ZoneError("truncation exhausted after " + std::to_string(i) + " rings: " + e.what());
    }
    const double r2 = equalize_inner_radius(g, v, root, r3, target, r, options);
    const Selection sel = lowest_component(annulus(g, root, r2, r3), v, options);
    out.rings.push_back({i + 1, r2, r3, sel.energy.lambda, sel.energy.error_indicator, sel.index, sel.count});
    out.partition.clusters.push_back(sel.cluster);
    r = r3;
  }
  return out;
}

Partition constructive_annulus_partition(const MetricGraph& g, const Potential& v, const Point& root, int k,
                                         double target, double sigma_lower, const ZoneOptions& options) {
  require_above_sigma(target, sigma_lower);
  if (k < 1) throw ZoneError("k must be positive");
  const double r1 = find_ball_radius(g, v, root, target, options);
  Partition p;
  p.clusters.push_back(ball(g, root, r1));
  if (k > 1) {
    RingPartition rings = build_equipartition_rings(g, v, root, target, k - 1, sigma_lower, options, r1);
    for (auto& c : rings.partition.clusters) p.clusters.push_back(std::move(c));
  }
  return p;
}

std::string ring_table_csv(const std::vector<Ring>& rings) {
  std::ostringstream os;
  os << "i,R_inner,R_outer,lambda,component\n";
  for (const auto& r : rings)
    os << r.index << ',' << format_number(r.r_inner) << ',' << format_number(r.r_outer) << ','
       << format_number(r.lambda) << ',' << r.component << '\n';
  return os.str();
}

}  // namespace qgraph
