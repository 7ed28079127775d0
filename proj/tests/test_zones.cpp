#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qgraph/gallery.hpp"
#include "qgraph/zones.hpp"

using namespace qgraph;
using std::numbers::pi;

namespace {

ZoneOptions opts() {
  ZoneOptions o;
  o.h = 0.02;
  return o;
}

}  // namespace

TEST_CASE("outer radius on the half-line") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const Point root = g.vertex_point(0);
  const double r3 = find_outer_radius(g, v, root, 1.0, pi * pi, 0.0, opts());
  CHECK(r3 - 1.0 >= 1.0 - 1e-6);
  CHECK(r3 - 1.0 <= 1.0 + 1e-3);
  CHECK(annulus_energy(g, v, root, 1.0, r3, opts()) <= pi * pi * (1.0 + 1e-9));

  const double r3b = find_outer_radius(g, v, root, 1.0, 4.0 * pi * pi, 0.0, opts());
  CHECK(r3b - 1.0 >= 0.5 - 1e-6);
  CHECK(r3b - 1.0 <= 0.5 + 1e-3);
}

TEST_CASE("outer radius returns the first probe when it already matches") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const Point root = g.vertex_point(0);
  const double target = pi * pi;
  const double probe = 0.5 * pi / std::sqrt(target);
  const double exact = annulus_energy(g, v, root, 1.0, 1.0 + probe, opts());
  CHECK(find_outer_radius(g, v, root, 1.0, exact, 0.0, opts()) == doctest::Approx(1.0 + probe));
}

TEST_CASE("inner radius equalization") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const Point root = g.vertex_point(0);
  const double r2 = equalize_inner_radius(g, v, root, 5.0, pi * pi, 1.0, opts());
  CHECK(std::abs(r2 - 4.0) < 1e-3);
  CHECK(std::abs(annulus_energy(g, v, root, r2, 5.0, opts()) - pi * pi) <= 1e-3 * pi * pi);
  const double r2b = equalize_inner_radius(g, v, root, 5.0, 4.0 * pi * pi, 1.0, opts());
  CHECK(std::abs(r2b - 4.5) < 1e-3);

  const double already = annulus_energy(g, v, root, 4.0, 5.0, opts());
  CHECK(equalize_inner_radius(g, v, root, 5.0, already, 4.0, opts()) == 4.0);
  CHECK_THROWS_AS((void)equalize_inner_radius(g, v, root, 5.0, pi * pi, 4.5, opts()), ZoneError);
}

TEST_CASE("ball radius") {
  const MetricGraph g = make_half_line(30.0);
  const double r = find_ball_radius(g, Potential::zero(g), g.vertex_point(0), pi * pi, opts());
  CHECK(std::abs(r - 0.5) < 1e-4);
}

TEST_CASE("zone preconditions") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::constant(g, 2.0);
  CHECK_THROWS_AS((void)find_outer_radius(g, v, g.vertex_point(0), 1.0, 1.5, 2.0, opts()), ZoneError);
  CHECK_THROWS_AS((void)find_outer_radius(g, v, g.vertex_point(0), 0.0, 10.0, 2.0, opts()), ZoneError);
  const MetricGraph short_line = make_half_line(5.0);
  CHECK_THROWS_AS((void)build_equipartition_rings(short_line, Potential::zero(short_line), short_line.vertex_point(0),
                                                  pi * pi, 10, 0.0, opts()),
                  ZoneError);
}

TEST_CASE("unit rings on the half-line") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const RingPartition rp = build_equipartition_rings(g, v, g.vertex_point(0), pi * pi, 3, 0.0, opts());
  REQUIRE(rp.rings.size() == 3);
  REQUIRE(rp.partition.clusters.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Ring& r = rp.rings[i];
    CHECK(std::abs(r.r_outer - r.r_inner - 1.0) < 1e-3);
    CHECK(std::abs(r.lambda - pi * pi) <= 1e-3 * pi * pi);
    CHECK(r.component_count == 1);
    CHECK(r.index == static_cast<int>(i) + 1);
    if (i > 0) CHECK(r.r_inner >= rp.rings[i - 1].r_outer - 1e-12);
  }
  CHECK(validate(rp.partition).ok());
}

TEST_CASE("star rings pick the lowest edge among equal components") {
  const MetricGraph g = make_star(3, 20.0);
  const RingPartition rp = build_equipartition_rings(g, Potential::zero(g), g.vertex_point(0), pi * pi, 2, 0.0, opts());
  REQUIRE(rp.rings.size() == 2);
  for (const Ring& r : rp.rings) {
    CHECK(r.component_count == 3);
    CHECK(r.component == 0);
    CHECK(std::abs(r.lambda - pi * pi) <= 1e-3 * pi * pi);
  }
  for (const Subgraph& c : rp.partition.clusters) CHECK(c.first_edge() == 0);
  CHECK(validate(rp.partition).ok());
}

TEST_CASE("constructive annulus partition") {
  const MetricGraph g = make_half_line(30.0);
  const Potential v = Potential::zero(g);
  const Partition p = constructive_annulus_partition(g, v, g.vertex_point(0), 3, pi * pi, 0.0, opts());
  REQUIRE(p.clusters.size() == 3);
  CHECK(validate(p).ok());
  const EnergyReport r = energy(p, v, 0.02);
  CHECK(r.energy <= pi * pi * (1.0 + 1e-3));

  const Partition one = constructive_annulus_partition(g, v, g.vertex_point(0), 1, pi * pi, 0.0, opts());
  REQUIRE(one.clusters.size() == 1);
  CHECK(volume(one.clusters[0]) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("ring table CSV") {
  const std::vector<Ring> rings{{1, 1.0, 2.0, 9.87, 1e-6, 0, 1}};
  const std::string csv = ring_table_csv(rings);
  CHECK(csv == "i,R_inner,R_outer,lambda,component\n1,1,2,9.87,0\n");
}
