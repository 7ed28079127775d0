#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/potential.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

enum class ScanDirection { ball, exterior };

struct ScanSample {
  double radius = 0.0;
  bool empty = false;  // region vanished; lambda is +inf
  double lambda = 0.0;
  double lambda_h = 0.0;
  double error_indicator = 0.0;
  double volume = 0.0;
};

struct RadiusScan {
  Point center;
  ScanDirection direction = ScanDirection::ball;
  std::vector<ScanSample> samples;
};

struct ScanOptions {
  double h = 0.05;
  SpectralOptions spectral{};
  Execution execution = Execution::parallel;
  /// Required ratio of truncation distance to the largest radius.
  double truncation_margin = 1.25;
};

/// Throws GraphError unless radii are positive and strictly increasing.
void check_radii(const std::vector<double>& radii);

/// Throws GraphError if some truncated end lies closer to `root` than
/// margin * r_max.
void check_truncation(const MetricGraph& g, const Point& root, double r_max, double margin);

/// Largest radius admitted by the truncation margin, or the eccentricity of
/// the root when the graph has no truncated ends.
[[nodiscard]] double admissible_radius(const MetricGraph& g, const Point& root, double margin);

/// `count` equally spaced radii ending at the admissible radius.
[[nodiscard]] std::vector<double> default_radii(const MetricGraph& g, const Point& root, int count = 8,
                                                double margin = 1.25);

/// Ground energies of ball(root, R) or exterior(root, R), each intersected
/// with `region` when given. Empty regions are recorded, not solved.
[[nodiscard]] RadiusScan radius_scan(const MetricGraph& g, const Potential& v, const Point& root,
                                     const std::vector<double>& radii, ScanDirection direction,
                                     const ScanOptions& options = {}, const Subgraph* region = nullptr);

/// lambda(s intersected with ball(root, R)) for each R; nonincreasing in R.
[[nodiscard]] RadiusScan expanding_ball_scan(const MetricGraph& g, const Potential& v, const Subgraph& s,
                                             const Point& root, const std::vector<double>& radii,
                                             const ScanOptions& options = {});

struct SigmaBracket {
  double lower = 0.0;              // max over the trend
  std::vector<ScanSample> trend;   // exterior samples, nonempty only
  bool converged = false;          // last three values within the plateau tolerance
  std::vector<std::string> notes;
  [[nodiscard]] double summed_error() const;
};

struct SigmaOptions {
  ScanOptions scan{};
  double plateau_tolerance = 1e-3;
};

/// Lower estimate of the bottom of the essential spectrum from exterior
/// ground energies. Radii whose exterior is empty are dropped with a note.
[[nodiscard]] SigmaBracket sigma_estimate(const MetricGraph& g, const Potential& v, const Point& root,
                                          const std::vector<double>& radii, const SigmaOptions& options = {});

/// pi^2 / (4 vol(s)^2). Requires a nonempty region with a Dirichlet point.
[[nodiscard]] double nicaise_bound(const Subgraph& s);

struct Jump {
  double r_left = 0.0;
  double r_right = 0.0;
  double gap = 0.0;  // lambda(r_right) - lambda(r_left)
};

struct ContinuityReport {
  RadiusScan scan;
  std::vector<Jump> jumps;
  double jump_factor = 10.0;
};

/// Flags consecutive samples whose gap exceeds jump_factor times the local
/// variation, taken as the smaller neighbouring gap (or the solver noise
/// floor when that is larger).
[[nodiscard]] ContinuityReport continuity_scan(const MetricGraph& g, const Potential& v, const Point& root,
                                               ScanDirection mode, const std::vector<double>& radii,
                                               const ScanOptions& options = {}, double jump_factor = 10.0);

/// Jump detection on precomputed samples.
[[nodiscard]] std::vector<Jump> find_jumps(const std::vector<ScanSample>& samples, double jump_factor);

/// CSV with header R,lambda,error_indicator; empty samples print "inf".
[[nodiscard]] std::string to_csv(const RadiusScan& scan);

[[nodiscard]] std::string format_number(double x);

}  // namespace qgraph
