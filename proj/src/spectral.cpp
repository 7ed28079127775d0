#include "qgraph/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qgraph {

namespace {

struct LocalMatrices {
  double k[2][2];
  double m[2][2];
};

// Exact element matrices for linear shape functions on [x0, x1] with the
// edge's piecewise-constant potential.
LocalMatrices element(const MeshCell& c, const Piecewise& pot) {
  const double dx = c.x1 - c.x0;
  LocalMatrices lm{};
  lm.k[0][0] = lm.k[1][1] = 1.0 / dx;
  lm.k[0][1] = lm.k[1][0] = -1.0 / dx;
  lm.m[0][0] = lm.m[1][1] = dx / 3.0;
  lm.m[0][1] = lm.m[1][0] = dx / 6.0;
  for (std::size_t i = 0; i < pot.values.size(); ++i) {
    const double val = pot.values[i];
    if (val == 0.0) continue;
    const double s = std::max(c.x0, pot.breaks[i]);
    const double t = std::min(c.x1, pot.breaks[i + 1]);
    if (t <= s) continue;
    const double u0 = (s - c.x0) / dx;
    const double u1 = (t - c.x0) / dx;
    const double aa = (std::pow(1.0 - u0, 3) - std::pow(1.0 - u1, 3)) / 3.0;
    const double bb = (u1 * u1 * u1 - u0 * u0 * u0) / 3.0;
    const double ab = (u1 * u1 - u0 * u0) / 2.0 - (u1 * u1 * u1 - u0 * u0 * u0) / 3.0;
    lm.k[0][0] += val * dx * aa;
    lm.k[1][1] += val * dx * bb;
    lm.k[0][1] += val * dx * ab;
    lm.k[1][0] += val * dx * ab;
  }
  return lm;
}

void fix_sign(Eigen::VectorXd& f) {
  const double scale = f.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > 1e-12 * scale) {
      if (f[i] < 0.0) f = -f;
      return;
    }
  }
}

double lowest_potential(const Subgraph& s, const Potential& v) {
  double m = INFINITY;
  const MetricGraph& g = s.graph();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Piecewise& pw = v.on_edge(static_cast<int>(e));
    for (const auto& piece : s.pieces(static_cast<int>(e)))
      for (std::size_t i = 0; i < pw.values.size(); ++i)
        if (std::min(piece.hi, pw.breaks[i + 1]) > std::max(piece.lo, pw.breaks[i])) m = std::min(m, pw.values[i]);
  }
  return std::isfinite(m) ? m : 0.0;
}

struct Solve {
  Assembly assembly;
  EigenResult eig;
};

Solve solve(const Subgraph& s, const Potential& v, double h, int count, const SpectralOptions& options) {
  Solve out{assemble(s, v, h, options.min_cells), {}};
  if (out.assembly.mesh.dof_count == 0) throw SpectralError("subgraph has no free nodes");
  if (count > out.assembly.mesh.dof_count) throw SpectralError("requested more eigenvalues than discrete modes");
  EigenOptions eo = options.eigen;
  // K - V_min M is positive semidefinite, so V_min bounds the spectrum below
  eo.shift = lowest_potential(s, v) - 1e-3;
  out.eig = lowest_eigenpairs(out.assembly.op.stiffness, out.assembly.op.mass, count, eo);
  if (!out.eig.converged)
    throw ConvergenceError("eigensolver did not converge (residual " + std::to_string(out.eig.residual) + ")",
                           out.eig.residual);
  return out;
}

double clamp_tiny(double lambda, double scale) {
  return (lambda < 0.0 && lambda > -1e-10 * std::max(1.0, scale)) ? 0.0 : lambda;
}

}  // namespace

Mesh build_mesh(const Subgraph& s, double h, int min_cells) {
  if (!(h > 0.0)) throw SpectralError("mesh size must be positive");
  if (s.is_empty()) throw SpectralError("cannot mesh an empty subgraph");
  const MetricGraph& g = s.graph();
  Mesh mesh;
  mesh.h = h;
  mesh.vertex_node.assign(g.vertex_count(), -1);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const int vi = static_cast<int>(v);
    if (!s.contains_vertex(vi)) continue;
    const Point p = g.vertex_point(vi);
    mesh.vertex_node[v] = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back({p, s.is_dirichlet(p), -1});
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const int ei = static_cast<int>(e);
    const Edge& ed = g.edge(ei);
    for (const auto& piece : s.pieces(ei)) {
      const double len = piece.length();
      if (len < h) mesh.refined = true;
      const int n = std::max(min_cells, static_cast<int>(std::ceil(len / h - 1e-9)));
      auto end_node = [&](double x, int vertex) {
        if (vertex >= 0) return mesh.vertex_node[static_cast<std::size_t>(vertex)];
        const Point p{-1, ei, x};
        mesh.nodes.push_back({p, s.is_dirichlet(p), -1});
        return static_cast<int>(mesh.nodes.size()) - 1;
      };
      int prev = end_node(piece.lo, piece.lo == 0.0 ? ed.from : -1);
      double xprev = piece.lo;
      for (int i = 1; i <= n; ++i) {
        const double x = i == n ? piece.hi : piece.lo + len * static_cast<double>(i) / static_cast<double>(n);
        int cur;
        if (i == n) {
          cur = end_node(piece.hi, piece.hi == ed.length ? ed.to : -1);
        } else {
          mesh.nodes.push_back({Point{-1, ei, x}, false, -1});
          cur = static_cast<int>(mesh.nodes.size()) - 1;
        }
        mesh.cells.push_back({prev, cur, ei, xprev, x});
        prev = cur;
        xprev = x;
      }
    }
  }
  for (auto& node : mesh.nodes)
    if (!node.dirichlet) node.dof = mesh.dof_count++;
  return mesh;
}

DiscreteOperator assemble(const Mesh& mesh, const Subgraph& s, const Potential& v) {
  (void)s;
  std::vector<Eigen::Triplet<double>> kt;
  std::vector<Eigen::Triplet<double>> mt;
  kt.reserve(mesh.cells.size() * 4);
  mt.reserve(mesh.cells.size() * 4);
  for (const auto& c : mesh.cells) {
    const LocalMatrices lm = element(c, v.on_edge(c.edge));
    const int dofs[2] = {mesh.nodes[static_cast<std::size_t>(c.a)].dof, mesh.nodes[static_cast<std::size_t>(c.b)].dof};
    for (int i = 0; i < 2; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < 2; ++j) {
        if (dofs[j] < 0) continue;
        kt.emplace_back(dofs[i], dofs[j], lm.k[i][j]);
        mt.emplace_back(dofs[i], dofs[j], lm.m[i][j]);
      }
    }
  }
  DiscreteOperator op;
  op.stiffness.resize(mesh.dof_count, mesh.dof_count);
  op.mass.resize(mesh.dof_count, mesh.dof_count);
  op.stiffness.setFromTriplets(kt.begin(), kt.end());
  op.mass.setFromTriplets(mt.begin(), mt.end());
  return op;
}

Assembly assemble(const Subgraph& s, const Potential& v, double h, int min_cells) {
  Assembly a;
  a.mesh = build_mesh(s, h, min_cells);
  a.op = assemble(a.mesh, s, v);
  return a;
}

GroundStateResult ground_energy(const Subgraph& s, const Potential& v, double h, const SpectralOptions& options) {
  Solve coarse = solve(s, v, h, 1, options);
  Solve fine = solve(s, v, 0.5 * h, 1, options);

  GroundStateResult r;
  r.h = h;
  r.lambda_h = clamp_tiny(coarse.eig.values[0], coarse.eig.values[0]);
  r.lambda_half = clamp_tiny(fine.eig.values[0], fine.eig.values[0]);
  r.lambda_extrapolated = (4.0 * r.lambda_half - r.lambda_h) / 3.0;
  r.error_indicator = std::abs(r.lambda_h - r.lambda_half);
  r.residual = std::max(coarse.eig.residual, fine.eig.residual);
  r.iterations = coarse.eig.iterations + fine.eig.iterations;
  r.refined = coarse.assembly.mesh.refined;

  const Mesh& mesh = coarse.assembly.mesh;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.nodes.size()));
  const Eigen::VectorXd x = coarse.eig.vectors.col(0);
  const double norm = std::sqrt(x.dot(coarse.assembly.op.mass * x));
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    if (mesh.nodes[i].dof >= 0) f[static_cast<Eigen::Index>(i)] = x[mesh.nodes[i].dof] / norm;
  fix_sign(f);
  r.eigenfunction = std::move(f);
  r.mesh = mesh;

  const auto& ritz = coarse.eig.ritz_values;
  if (ritz.size() >= 2)
    r.degenerate = std::abs(ritz[1] - ritz[0]) <= 1e-6 * std::max(1.0, std::abs(ritz[0]));
  return r;
}

std::vector<EigenvalueEstimate> eigenvalues_below(const Subgraph& s, const Potential& v, double h, int count,
                                                  const SpectralOptions& options) {
  if (count < 1) throw SpectralError("count must be positive");
  Solve coarse = solve(s, v, h, count, options);
  Solve fine = solve(s, v, 0.5 * h, count, options);
  std::vector<EigenvalueEstimate> out;
  for (int j = 0; j < count; ++j) {
    EigenvalueEstimate e;
    e.lambda_h = clamp_tiny(coarse.eig.values[static_cast<std::size_t>(j)], coarse.eig.values[static_cast<std::size_t>(j)]);
    e.lambda_half = clamp_tiny(fine.eig.values[static_cast<std::size_t>(j)], fine.eig.values[static_cast<std::size_t>(j)]);
    e.lambda_extrapolated = (4.0 * e.lambda_half - e.lambda_h) / 3.0;
    e.error_indicator = std::abs(e.lambda_h - e.lambda_half);
    out.push_back(e);
  }
  return out;
}

double rayleigh(const Mesh& mesh, const DiscreteOperator& op, const Eigen::VectorXd& f) {
  if (f.size() != static_cast<Eigen::Index>(mesh.nodes.size())) throw SpectralError("function size does not match mesh");
  const double scale = f.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw SpectralError("Rayleigh quotient of the zero function");
  Eigen::VectorXd x(mesh.dof_count);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& node = mesh.nodes[i];
    const double fi = f[static_cast<Eigen::Index>(i)];
    if (node.dof < 0) {
      if (std::abs(fi) > 1e-14 * scale) throw SpectralError("function does not vanish on the Dirichlet boundary");
      continue;
    }
    x[node.dof] = fi;
  }
  return x.dot(op.stiffness * x) / x.dot(op.mass * x);
}

double vertex_flux(const Mesh& mesh, const Eigen::VectorXd& f, int vertex) {
  const int node = mesh.vertex_node.at(static_cast<std::size_t>(vertex));
  if (node < 0) throw SpectralError("vertex not in mesh");
  double flux = 0.0;
  for (const auto& c : mesh.cells) {
    const double dx = c.x1 - c.x0;
    if (c.a == node) flux += (f[c.b] - f[c.a]) / dx;
    if (c.b == node) flux += (f[c.a] - f[c.b]) / dx;
  }
  return flux;
}

}  // namespace qgraph
