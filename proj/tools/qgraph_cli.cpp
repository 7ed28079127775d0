#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qgraph/asymptotics.hpp"
#include "qgraph/gallery.hpp"
#include "qgraph/io.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/partition.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/zones.hpp"

using namespace qgraph;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw GraphError("grid needs step > 0 and rmax >= rmin");
  std::vector<double> r;
  const long n = std::lround((hi - lo) / step);
  for (long i = 0; i <= n; ++i) r.push_back(lo + step * static_cast<double>(i));
  return r;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground energies, essential-threshold estimates and spectral partitions of metric graphs"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Parallel solves (default: available cores)");
  bool serial = false;
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  double mesh = 0.01;
  int count = 1;
  std::string graph_path;
  std::string subgraph = "whole";
  std::string out;

  auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenvalues of a subgraph");
  spectrum->add_option("graph", graph_path, "Graph file")->required();
  spectrum->add_option("--subgraph", subgraph, "whole | ball:R@P | exterior:R@P | annulus:R1:R2@P | file");
  spectrum->add_option("--mesh", mesh, "Mesh size h")->capture_default_str();
  spectrum->add_option("--count", count, "Number of eigenvalues")->capture_default_str();
  spectrum->add_option("--out", out, "Report file (default stdout)");

  std::string root_text = "0";
  std::string radii_text;
  int radius_count = 8;
  double plateau = 1e-3;
  double sigma_mesh = 0.05;
  auto* sigma = app.add_subcommand("sigma", "Essential threshold estimate from exterior energies");
  sigma->add_option("graph", graph_path, "Graph file")->required();
  sigma->add_option("--root", root_text, "Root point: vertex id or e<id>:<offset>")->capture_default_str();
  sigma->add_option("--radii", radii_text, "Comma-separated increasing radii (default: even schedule)");
  sigma->add_option("--count", radius_count, "Radii in the default schedule")->capture_default_str();
  sigma->add_option("--mesh", sigma_mesh, "Mesh size h")->capture_default_str();
  sigma->add_option("--tol", plateau, "Plateau tolerance")->capture_default_str();
  sigma->add_option("--out", out, "Report file (default stdout)");

  std::string mode = "ball";
  double rmin = 0.1;
  double rmax = 1.0;
  double step = 0.1;
  double jump_factor = 10.0;
  auto* scan = app.add_subcommand("scan", "Ball or exterior energies over a radius grid (CSV)");
  scan->add_option("graph", graph_path, "Graph file")->required();
  scan->add_option("--mode", mode, "ball | exterior")->check(CLI::IsMember({"ball", "exterior"}))->capture_default_str();
  scan->add_option("--root", root_text, "Root point")->capture_default_str();
  scan->add_option("--rmin", rmin)->capture_default_str();
  scan->add_option("--rmax", rmax)->capture_default_str();
  scan->add_option("--step", step)->capture_default_str();
  scan->add_option("--mesh", sigma_mesh, "Mesh size h")->capture_default_str();
  scan->add_option("--jump-factor", jump_factor, "Jump threshold factor")->capture_default_str();
  scan->add_option("--out", out, "CSV file (default stdout)");

  double lambda = 0.0;
  int rings = 1;
  double sigma_value = NAN;
  std::string partition_out;
  double energy_tol = 1e-3;
  auto* zones = app.add_subcommand("zones", "Equal-energy rings around a root (CSV ring table)");
  zones->add_option("graph", graph_path, "Graph file")->required();
  zones->add_option("--root", root_text, "Root point")->capture_default_str();
  zones->add_option("--lambda", lambda, "Target energy")->required();
  zones->add_option("--rings", rings, "Number of rings")->capture_default_str();
  zones->add_option("--sigma", sigma_value, "Threshold estimate (default: computed)");
  zones->add_option("--mesh", sigma_mesh, "Mesh size h")->capture_default_str();
  zones->add_option("--tol", energy_tol, "Relative energy tolerance")->capture_default_str();
  zones->add_option("--partition-out", partition_out, "Partition file");
  zones->add_option("--out", out, "CSV file (default stdout)");

  int k = 2;
  int max_cuts = -1;
  double equalize_tol = 1e-3;
  int candidates = 8;
  auto* partition = app.add_subcommand("partition", "Min-max k-partition search and existence verdict");
  partition->add_option("graph", graph_path, "Graph file")->required();
  partition->add_option("--k", k, "Number of clusters")->capture_default_str();
  partition->add_option("--max-cuts", max_cuts, "Cut budget (default k+2)");
  partition->add_option("--tol", equalize_tol, "Equalization tolerance")->capture_default_str();
  partition->add_option("--mesh", sigma_mesh, "Mesh size h")->capture_default_str();
  partition->add_option("--root", root_text, "Root point for the threshold estimate")->capture_default_str();
  partition->add_option("--candidate-edges", candidates, "Edges nearest the root that may be cut")
      ->capture_default_str();
  partition->add_option("--partition-out", partition_out, "Partition file");
  partition->add_option("--out", out, "Verdict file (default stdout)");

  std::string case_name = "all";
  std::string report_path;
  auto* gallery = app.add_subcommand("validate-gallery", "Run the built-in validation cases");
  gallery->add_option("--case", case_name, "Case name or all")->capture_default_str();
  gallery->add_option("--report", report_path, "Machine-readable report file");

  CLI11_PARSE(app, argc, argv);
  if (jobs > 0) set_thread_count(jobs);
  const Execution exec = serial ? Execution::serial : Execution::parallel;

  try {
    if (*spectrum) {
      const GraphFile f = read_graph(graph_path);
      const Subgraph s = parse_subgraph(f.graph, subgraph);
      const SpectralOptions so;
      emit(spectrum_report(eigenvalues_below(s, f.potential, mesh, count, so), mesh, so.eigen.tolerance), out);
    } else if (*sigma) {
      const GraphFile f = read_graph(graph_path);
      const Point root = parse_point(f.graph, root_text);
      SigmaOptions so;
      so.scan.h = sigma_mesh;
      so.scan.execution = exec;
      so.plateau_tolerance = plateau;
      const auto radii = radii_text.empty() ? default_radii(f.graph, root, radius_count) : parse_list(radii_text);
      emit(sigma_report(f.graph, root, sigma_estimate(f.graph, f.potential, root, radii, so)), out);
    } else if (*scan) {
      const GraphFile f = read_graph(graph_path);
      const Point root = parse_point(f.graph, root_text);
      ScanOptions so;
      so.h = sigma_mesh;
      so.execution = exec;
      const auto report = continuity_scan(f.graph, f.potential, root,
                                          mode == "ball" ? ScanDirection::ball : ScanDirection::exterior,
                                          grid(rmin, rmax, step), so, jump_factor);
      emit(to_csv(report.scan), out);
      for (const auto& j : report.jumps)
        std::cerr << "jump between R=" << format_number(j.r_left) << " and R=" << format_number(j.r_right)
                  << " (gap " << format_number(j.gap) << ")\n";
    } else if (*zones) {
      const GraphFile f = read_graph(graph_path);
      const Point root = parse_point(f.graph, root_text);
      ZoneOptions zo;
      zo.h = sigma_mesh;
      zo.energy_tolerance = energy_tol;
      double s = sigma_value;
      if (std::isnan(s)) {
        SigmaOptions so;
        so.scan.h = sigma_mesh;
        so.scan.execution = exec;
        s = sigma_estimate(f.graph, f.potential, root, default_radii(f.graph, root), so).lower;
      }
      const RingPartition rp = build_equipartition_rings(f.graph, f.potential, root, lambda, rings, s, zo);
      emit(ring_table_csv(rp.rings), out);
      if (!partition_out.empty()) write_text(partition_out, partition_to_json(rp.partition));
    } else if (*partition) {
      const GraphFile f = read_graph(graph_path);
      const Point root = parse_point(f.graph, root_text);
      ExistenceOptions eo;
      eo.optimize.h = sigma_mesh;
      eo.optimize.max_cuts = max_cuts;
      eo.optimize.equalize_tolerance = equalize_tol;
      eo.optimize.max_candidate_edges = candidates;
      eo.optimize.execution = exec;
      eo.optimize.root_vertex = root.is_vertex() ? root.vertex : f.graph.edge(root.edge).from;
      eo.sigma.scan.h = sigma_mesh;
      eo.sigma.scan.execution = exec;
      const ExistenceVerdict v = classify_existence(f.graph, f.potential, k, root, eo);
      emit(verdict_report(v), out);
      if (!partition_out.empty()) write_text(partition_out, partition_to_json(v.witness));
    } else if (*gallery) {
      const auto reports = run_gallery(case_name, exec);
      bool all = true;
      std::printf("%-26s %-6s %9s\n", "case", "result", "seconds");
      for (const auto& r : reports) {
        std::printf("%-26s %-6s %9.2f\n", r.name.c_str(), r.passed ? "pass" : "FAIL", r.seconds);
        if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
        for (const auto& c : r.checks)
          if (!c.passed)
            std::printf("  %s: %s vs %s (tol %s)\n", c.name.c_str(), format_number(c.value).c_str(),
                        format_number(c.expected).c_str(), format_number(c.tolerance).c_str());
        all = all && r.passed;
      }
      if (!report_path.empty()) write_text(report_path, gallery_report(reports));
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
