#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qgraph/eigensolver.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/potential.hpp"

namespace qgraph {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshNode {
  Point location;
  bool dirichlet = false;
  int dof = -1;  // row in the discrete operator, -1 for Dirichlet nodes
};

struct MeshCell {
  int a = 0;  // node at x0
  int b = 0;  // node at x1
  int edge = 0;
  double x0 = 0.0;
  double x1 = 0.0;
};

/// Continuous piecewise-linear mesh of a subgraph. Each retained piece gets a
/// uniform subdivision; vertices are shared nodes, which is what imposes
/// continuity across them.
struct Mesh {
  double h = 0.0;
  std::vector<MeshNode> nodes;
  std::vector<MeshCell> cells;
  std::vector<int> vertex_node;  // per graph vertex, -1 if absent
  int dof_count = 0;
  bool refined = false;  // some piece was shorter than h and got extra cells
};

/// Stiffness (|f'|^2 + V|f|^2) and consistent mass matrices on the free nodes.
struct DiscreteOperator {
  SparseMatrix stiffness;
  SparseMatrix mass;
};

struct SpectralOptions {
  EigenOptions eigen{};
  int min_cells = 2;  // per piece
};

[[nodiscard]] Mesh build_mesh(const Subgraph& s, double h, int min_cells = 2);
[[nodiscard]] DiscreteOperator assemble(const Mesh& mesh, const Subgraph& s, const Potential& v);

struct Assembly {
  Mesh mesh;
  DiscreteOperator op;
};
[[nodiscard]] Assembly assemble(const Subgraph& s, const Potential& v, double h, int min_cells = 2);

struct GroundStateResult {
  double h = 0.0;
  double lambda_h = 0.0;
  double lambda_half = 0.0;  // at h/2
  double lambda_extrapolated = 0.0;
  double error_indicator = 0.0;
  Mesh mesh;                       // the h mesh
  Eigen::VectorXd eigenfunction;   // per mesh node, unit discrete L2 norm
  double residual = 0.0;
  int iterations = 0;
  bool refined = false;
  bool degenerate = false;  // ground eigenvalue numerically repeated
};

/// Smallest eigenvalue at h and h/2 with Richardson extrapolation
/// (4 lambda_{h/2} - lambda_h) / 3.
[[nodiscard]] GroundStateResult ground_energy(const Subgraph& s, const Potential& v, double h,
                                              const SpectralOptions& options = {});

struct EigenvalueEstimate {
  double lambda_h = 0.0;
  double lambda_half = 0.0;
  double lambda_extrapolated = 0.0;
  double error_indicator = 0.0;
};

/// Lowest `count` eigenvalues, nondecreasing, each extrapolated.
[[nodiscard]] std::vector<EigenvalueEstimate> eigenvalues_below(const Subgraph& s, const Potential& v, double h,
                                                                int count, const SpectralOptions& options = {});

/// (f^T K f) / (f^T M f) for f sampled at every mesh node; f must vanish on
/// Dirichlet nodes and must not vanish identically.
[[nodiscard]] double rayleigh(const Mesh& mesh, const DiscreteOperator& op, const Eigen::VectorXd& f);

/// Sum over incident mesh edges of the outward difference quotient of f at a
/// graph vertex; zero in the limit for functions meeting the Kirchhoff condition.
[[nodiscard]] double vertex_flux(const Mesh& mesh, const Eigen::VectorXd& f, int vertex);

}  // namespace qgraph
