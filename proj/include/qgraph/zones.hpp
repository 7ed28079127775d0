#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/partition.hpp"
#include "qgraph/potential.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

class ZoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZoneOptions {
  double h = 0.05;
  SpectralOptions spectral{};
  double energy_tolerance = 1e-3;        // relative
  double radius_tolerance_factor = 1e-6;  // times the root eccentricity
  double truncation_margin = 1.25;
  int max_steps = 200;
  /// Energy tolerance relative to the target for accepting the first probe.
  double first_probe_tolerance = 1e-9;
};

/// Ground energy of the closed annulus (inf when empty).
[[nodiscard]] double annulus_energy(const MetricGraph& g, const Potential& v, const Point& root, double r1, double r2,
                                    const ZoneOptions& options = {});

/// Smallest R3 (to the radius tolerance) with lambda(annulus(R1, R3)) <= target.
/// `sigma_lower` is the threshold estimate the target must exceed.
[[nodiscard]] double find_outer_radius(const MetricGraph& g, const Potential& v, const Point& root, double r1,
                                       double target, double sigma_lower, const ZoneOptions& options = {});

/// R2 in [R1, R3) with lambda(annulus(R2, R3)) within tolerance of target.
[[nodiscard]] double equalize_inner_radius(const MetricGraph& g, const Potential& v, const Point& root, double r3,
                                           double target, double r1, const ZoneOptions& options = {});

/// Smallest R (to the radius tolerance) with lambda(ball(root, R)) <= target.
[[nodiscard]] double find_ball_radius(const MetricGraph& g, const Potential& v, const Point& root, double target,
                                      const ZoneOptions& options = {});

struct Ring {
  int index = 0;
  double r_inner = 0.0;
  double r_outer = 0.0;
  double lambda = 0.0;
  double error_indicator = 0.0;
  int component = 0;  // position among the annulus components
  int component_count = 0;
};

struct RingPartition {
  std::vector<Ring> rings;
  Partition partition;
};

/// N contiguous rings of energy `target`, starting at `start_radius` (or at
/// the smallest ball radius of energy <= target when not given). Each ring's
/// cluster is its lowest-energy component, ties going to the lowest edge.
[[nodiscard]] RingPartition build_equipartition_rings(const MetricGraph& g, const Potential& v, const Point& root,
                                                      double target, int count, double sigma_lower,
                                                      const ZoneOptions& options = {},
                                                      std::optional<double> start_radius = std::nullopt);

/// Ball of energy <= target plus k-1 rings.
[[nodiscard]] Partition constructive_annulus_partition(const MetricGraph& g, const Potential& v, const Point& root,
                                                       int k, double target, double sigma_lower,
                                                       const ZoneOptions& options = {});

/// CSV with header i,R_inner,R_outer,lambda,component.
[[nodiscard]] std::string ring_table_csv(const std::vector<Ring>& rings);

}  // namespace qgraph
