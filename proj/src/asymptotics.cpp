#include "qgraph/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qgraph {

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw GraphError("empty radius schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw GraphError("radii must be positive and finite");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw GraphError("radii must be strictly increasing");
  }
}

void check_truncation(const MetricGraph& g, const Point& root, double r_max, double margin) {
  for (const auto& t : g.truncated_ends()) {
    const double d = distance(g, root, g.vertex_point(t.vertex));
    if (d < margin * r_max * (1.0 - 1e-12))
      throw GraphError("truncation at vertex " + std::to_string(g.vertex_id(t.vertex)) + " (distance " +
                       format_number(d) + ") too close for radius " + format_number(r_max));
  }
}

double admissible_radius(const MetricGraph& g, const Point& root, double margin) {
  if (g.truncated_ends().empty()) return eccentricity(g, root);
  double r = INFINITY;
  for (const auto& t : g.truncated_ends()) r = std::min(r, distance(g, root, g.vertex_point(t.vertex)) / margin);
  return r;
}

std::vector<double> default_radii(const MetricGraph& g, const Point& root, int count, double margin) {
  if (count < 1) throw GraphError("radius count must be positive");
  const double r_max = admissible_radius(g, root, margin);
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(r_max * i / count);
  return out;
}

RadiusScan radius_scan(const MetricGraph& g, const Potential& v, const Point& root, const std::vector<double>& radii,
                       ScanDirection direction, const ScanOptions& options, const Subgraph* region) {
  check_radii(radii);
  if (!g.is_valid(root)) throw GraphError("invalid root point");
  check_truncation(g, root, radii.back(), options.truncation_margin);

  RadiusScan scan;
  scan.center = root;
  scan.direction = direction;
  scan.samples.resize(radii.size());
  for_each_index(radii.size(), options.execution, [&](std::size_t i) {
    const double r = radii[i];
    Subgraph s = direction == ScanDirection::ball ? ball(g, root, r) : exterior(g, root, r);
    if (region) s = intersect(s, *region);
    ScanSample& out = scan.samples[i];
    out.radius = r;
    if (s.is_empty()) {
      out.empty = true;
      out.lambda = out.lambda_h = INFINITY;
      return;
    }
    out.volume = volume(s);
    const GroundStateResult gs = ground_energy(s, v, options.h, options.spectral);
    out.lambda = gs.lambda_extrapolated;
    out.lambda_h = gs.lambda_h;
    out.error_indicator = gs.error_indicator;
  });
  return scan;
}

RadiusScan expanding_ball_scan(const MetricGraph& g, const Potential& v, const Subgraph& s, const Point& root,
                               const std::vector<double>& radii, const ScanOptions& options) {
  return radius_scan(g, v, root, radii, ScanDirection::ball, options, &s);
}

double SigmaBracket::summed_error() const {
  double sum = 0.0;
  for (const auto& t : trend) sum += t.error_indicator;
  return sum;
}

SigmaBracket sigma_estimate(const MetricGraph& g, const Potential& v, const Point& root,
                            const std::vector<double>& radii, const SigmaOptions& options) {
  const RadiusScan scan = radius_scan(g, v, root, radii, ScanDirection::exterior, options.scan);
  SigmaBracket b;
  for (const auto& s : scan.samples) {
    if (s.empty) {
      b.notes.push_back("exterior empty at R = " + format_number(s.radius) + "; schedule truncated");
      break;
    }
    b.trend.push_back(s);
  }
  if (b.trend.empty()) throw GraphError("exterior empty at every radius");
  b.lower = b.trend.front().lambda;
  for (const auto& t : b.trend) b.lower = std::max(b.lower, t.lambda);
  if (b.trend.size() >= 3) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = b.trend.size() - 3; i < b.trend.size(); ++i) {
      lo = std::min(lo, b.trend[i].lambda);
      hi = std::max(hi, b.trend[i].lambda);
    }
    b.converged = hi - lo <= options.plateau_tolerance * std::max(std::abs(hi), 1e-300);
  }
  if (!b.converged) b.notes.push_back("no plateau within the schedule");
  return b;
}

double nicaise_bound(const Subgraph& s) {
  if (s.is_empty()) throw GraphError("bound of an empty region");
  if (s.boundary().empty()) throw GraphError("bound requires a Dirichlet point");
  const double vol = volume(s);
  return std::numbers::pi * std::numbers::pi / (4.0 * vol * vol);
}

std::vector<Jump> find_jumps(const std::vector<ScanSample>& samples, double jump_factor) {
  std::vector<Jump> jumps;
  std::size_t n = 0;
  while (n < samples.size() && !samples[n].empty) ++n;
  if (n < 2) return jumps;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = samples[i + 1].lambda - samples[i].lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double local = INFINITY;
    if (i > 0) local = std::min(local, std::abs(d[i - 1]));
    if (i + 2 < n) local = std::min(local, std::abs(d[i + 1]));
    if (!std::isfinite(local)) continue;
    const double scale = std::max({1.0, std::abs(samples[i].lambda), std::abs(samples[i + 1].lambda)});
    const double noise = 4.0 * (samples[i].error_indicator + samples[i + 1].error_indicator) + 1e-9 * scale;
    if (std::abs(d[i]) > jump_factor * std::max(local, noise))
      jumps.push_back({samples[i].radius, samples[i + 1].radius, d[i]});
  }
  return jumps;
}

ContinuityReport continuity_scan(const MetricGraph& g, const Potential& v, const Point& root, ScanDirection mode,
                                 const std::vector<double>& radii, const ScanOptions& options, double jump_factor) {
  ContinuityReport r;
  r.jump_factor = jump_factor;
  r.scan = radius_scan(g, v, root, radii, mode, options);
  r.jumps = find_jumps(r.scan.samples, jump_factor);
  return r;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string to_csv(const RadiusScan& scan) {
  std::ostringstream os;
  os << "R,lambda,error_indicator\n";
  for (const auto& s : scan.samples)
    os << format_number(s.radius) << ',' << format_number(s.lambda) << ',' << format_number(s.error_indicator)
       << '\n';
  return os.str();
}

}  // namespace qgraph
