#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qgraph/asymptotics.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/potential.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Clusters need not cover the graph. Clusters produced by cutting carry the
/// cut points as marks.
struct Partition {
  std::vector<Subgraph> clusters;
  std::vector<Point> cuts;
  bool exhaustive = false;
};

struct ClusterEnergy {
  double lambda = 0.0;  // extrapolated
  double lambda_h = 0.0;
  double error_indicator = 0.0;
};

struct EnergyReport {
  std::vector<ClusterEnergy> clusters;
  double energy = 0.0;
  int argmax = -1;
  std::vector<int> ties;  // clusters within 1e-9 relative of the maximum

  [[nodiscard]] double summed_error() const;
  [[nodiscard]] double max_error() const;
};

[[nodiscard]] ClusterEnergy cluster_energy(const Subgraph& s, const Potential& v, double h,
                                           const SpectralOptions& options = {});

[[nodiscard]] EnergyReport energy(const Partition& p, const Potential& v, double h = 0.05,
                                  const SpectralOptions& options = {}, Execution execution = Execution::parallel);

struct Diagnostics {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Connectivity, nonemptiness, interior-disjointness, and the Dirichlet
/// condition at shared points and cut points.
[[nodiscard]] Diagnostics validate(const Partition& p);

/// Connected components of the graph cut at the given points.
[[nodiscard]] std::vector<Subgraph> cut_components(const MetricGraph& g, const std::vector<Point>& cuts);

struct OptimizeOptions {
  int max_cuts = -1;  // -1: k + 2
  double h = 0.05;
  SpectralOptions spectral{};
  /// Candidate edges are those nearest to this vertex index.
  int root_vertex = 0;
  int max_candidate_edges = 8;
  /// Explicit candidate edge indices; overrides the nearest-edge rule.
  std::vector<int> candidate_edges;
  int max_cuts_per_edge = -1;  // -1: no limit
  int descent_sweeps = 30;
  double offset_tolerance = 1e-7;  // relative to edge length
  double equalize_tolerance = 1e-3;
  int equalize_sweeps = 200;
  Execution execution = Execution::parallel;
};

struct OptimizeResult {
  Partition partition;
  EnergyReport report;
  std::vector<int> topology;  // cut count per candidate edge
  std::vector<int> candidate_edges;
  int topologies_evaluated = 0;
  long evaluations = 0;
};

/// Two-stage search for the k-partition of least energy: enumerate cut counts
/// per candidate edge, then optimize offsets by golden-section coordinate
/// descent and an equalization pass. The k lowest components are kept.
[[nodiscard]] OptimizeResult optimize_k(const MetricGraph& g, const Potential& v, int k,
                                        const OptimizeOptions& options = {});

/// Offsets optimized for one fixed topology; `counts` has one entry per
/// candidate edge. Returns an infinite energy when fewer than k components
/// arise.
[[nodiscard]] OptimizeResult optimize_topology(const MetricGraph& g, const Potential& v, int k,
                                               const std::vector<int>& candidate_edges,
                                               const std::vector<int>& counts, const OptimizeOptions& options = {});

enum class Existence { exists_certified, boundary_case, inconclusive };
[[nodiscard]] const char* to_string(Existence e);

struct ExistenceOptions {
  OptimizeOptions optimize{};
  SigmaOptions sigma{};
  std::vector<double> radii;  // empty: default_radii
  double margin_absolute = 1e-2;
  double margin_relative = 1e-3;
};

struct ExistenceVerdict {
  int k = 0;
  double best_energy = 0.0;
  SigmaBracket sigma;
  Existence classification = Existence::inconclusive;
  double margin = 0.0;
  Partition witness;
  EnergyReport report;
};

/// Certifies a minimizer when the best energy sits below the essential
/// threshold estimate by more than the margin; never claims non-existence.
[[nodiscard]] ExistenceVerdict classify_existence(const MetricGraph& g, const Potential& v, int k, const Point& root,
                                                  const ExistenceOptions& options = {});

/// max(absolute, relative * |sigma|, 2 * (summed error indicators)).
[[nodiscard]] double existence_margin(const ExistenceOptions& options, const SigmaBracket& sigma,
                                      const EnergyReport& report);

[[nodiscard]] Existence classify(double best_energy, double sigma_lower, double margin);

}  // namespace qgraph
