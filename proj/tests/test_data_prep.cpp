#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "itl/data_prep.hpp"
#include "itl/error.hpp"
#include "itl/geo.hpp"

using namespace itl;

namespace {

Bus bus(std::string id, std::string zone, BusType type, std::optional<GeoPoint> at = {}) {
  return {std::move(id), std::move(zone), type, at};
}

Line line(std::string id, std::string from, std::string to, std::optional<double> x = 0.1,
          std::optional<double> r = 100.0, double kv = 230.0, LineKind kind = LineKind::Line) {
  Line l;
  l.id = std::move(id);
  l.from_bus = std::move(from);
  l.to_bus = std::move(to);
  l.reactance = x;
  l.rating = r;
  l.voltage_kv = kv;
  l.kind = kind;
  return l;
}

// Point `km` due north of `p`.
GeoPoint north(GeoPoint p, double km) {
  return {p.lat_deg + km / geo::kEarthRadiusKm * 180.0 / std::acos(-1.0), p.lon_deg};
}

// Point `km` due east of `p` along its parallel.
GeoPoint east(GeoPoint p, double km) {
  const double deg = 180.0 / std::acos(-1.0);
  return {p.lat_deg, p.lon_deg + km / (geo::kEarthRadiusKm * std::cos(p.lat_deg / deg)) * deg};
}

}  // namespace

TEST_CASE("geodesic distance basics") {
  const GeoPoint p{40.0, -100.0};
  const GeoPoint q{41.0, -101.5};
  CHECK(geo::distance_km(p, p) == 0.0);
  CHECK(geo::distance_km(p, q) == doctest::Approx(geo::distance_km(q, p)));
  // One degree of latitude on the mean sphere.
  CHECK(geo::distance_km({0, 0}, {1, 0}) == doctest::Approx(111.195).epsilon(1e-4));
}

TEST_CASE("polygon containment and distance") {
  const std::vector<GeoPoint> square{{30, -110}, {30, -90}, {45, -90}, {45, -110}};
  CHECK(geo::contains(square, {40, -100}));
  CHECK_FALSE(geo::contains(square, {50, -100}));
  CHECK(geo::distance_to_polygon_km(square, {40, -100}) == 0.0);
  // Polygon edges are great-circle arcs; the eastern edge is a meridian.
  CHECK(geo::distance_to_polygon_km(square, east({37.5, -90}, 150)) == doctest::Approx(150.0).epsilon(1e-3));
}

TEST_CASE("missing location takes the centroid of equally near buses") {
  Network net({bus("A", "1", BusType::Load), bus("B", "1", BusType::Load, GeoPoint{40, -100}),
               bus("C", "1", BusType::Load, GeoPoint{42, -100})},
              {line("l1", "A", "B"), line("l2", "A", "C")});
  const Network out = infer_missing_locations(net);
  CHECK(out.bus("A").location->lat_deg == doctest::Approx(41.0));
  CHECK(out.bus("A").location->lon_deg == doctest::Approx(-100.0));
  CHECK(*out.bus("B").location == GeoPoint{40, -100});
}

TEST_CASE("chain inherits the nearest located bus") {
  Network net({bus("X", "1", BusType::Load), bus("Y", "1", BusType::Load), bus("Z", "1", BusType::Load, GeoPoint{35, -90})},
              {line("l1", "X", "Y"), line("l2", "Y", "Z")});
  const Network out = infer_missing_locations(net);
  CHECK(*out.bus("X").location == GeoPoint{35, -90});
  CHECK(*out.bus("Y").location == GeoPoint{35, -90});
}

TEST_CASE("island without any location cannot be resolved") {
  Network net({bus("A", "1", BusType::Load), bus("B", "1", BusType::Load)}, {line("l", "A", "B")});
  CHECK_THROWS_AS(infer_missing_locations(net), ImputationError);
}

TEST_CASE("geographic filter") {
  const std::vector<GeoPoint> square{{30, -110}, {30, -90}, {45, -90}, {45, -110}};
  PrepConfig config;
  config.boundary_polygon = square;
  config.boundary_buffer_km = 100.0;
  Network net({bus("in", "1", BusType::Load, GeoPoint{40, -100}), bus("edge", "1", BusType::Load, GeoPoint{37.5, -90}),
               bus("far", "1", BusType::Load, east({37.5, -90}, 150))},
              {line("l1", "in", "edge"), line("l2", "edge", "far")});
  const Network out = filter_by_geography(net, config);
  CHECK(out.buses().size() == 2);
  CHECK(out.find_bus("edge"));
  CHECK_FALSE(out.find_bus("far"));
  CHECK(out.lines().size() == 1);

  config.boundary_polygon.reset();
  CHECK(filter_by_geography(net, config) == net);
}

TEST_CASE("radial generator makes its neighbor a generator") {
  Network net({bus("G", "1", BusType::Generator), bus("T", "1", BusType::Transmission),
               bus("U", "1", BusType::Transmission), bus("V", "1", BusType::Transmission)},
              {line("g", "G", "T"), line("a", "T", "U"), line("b", "U", "V"), line("c", "V", "T")});
  const Network out = reduce_radial_buses(net);
  CHECK_FALSE(out.find_bus("G"));
  CHECK(out.bus("T").type == BusType::Generator);
  CHECK(out.lines().size() == 3);
}

TEST_CASE("triangle has nothing to reduce") {
  Network net({bus("A", "1", BusType::Load), bus("B", "1", BusType::Generator), bus("C", "1", BusType::Load)},
              {line("1", "A", "B"), line("2", "B", "C"), line("3", "C", "A")});
  CHECK(reduce_radial_buses(net) == net);
}

TEST_CASE("reduction cascades along a chain") {
  Network net({bus("L", "1", BusType::Load), bus("T", "1", BusType::Transmission), bus("T2", "1", BusType::Transmission),
               bus("X", "2", BusType::Generator)},
              {line("1", "L", "T"), line("2", "T", "T2"), line("3", "T2", "X")});
  const Network out = reduce_radial_buses(net);
  CHECK_FALSE(out.find_bus("L"));
  CHECK_FALSE(out.find_bus("T"));
  CHECK(out.bus("T2").type == BusType::Load);
  // X hangs off T2 across a zone boundary and must stay.
  CHECK(out.find_bus("X"));
  CHECK(out.find_line("3"));
}

TEST_CASE("generator and load both merged become unconstrained") {
  Network net({bus("G", "1", BusType::Generator), bus("L", "1", BusType::Load), bus("H", "1", BusType::Transmission),
               bus("P", "1", BusType::Transmission), bus("Q", "1", BusType::Transmission)},
              {line("1", "G", "H"), line("2", "L", "H"), line("3", "H", "P"), line("4", "P", "Q"), line("5", "Q", "H")});
  const Network out = reduce_radial_buses(net);
  CHECK(out.bus("H").type == BusType::Unconstrained);
}

TEST_CASE("reduced network has no intra-zone degree-one buses") {
  const Network out = reduce_radial_buses(fixtures::five_bus());
  CHECK(out == fixtures::five_bus());
}

TEST_CASE("dropping DC elements") {
  Line dc = line("dc", "B", "C");
  dc.is_dc = true;
  Line lone = line("dc2", "C", "D");
  lone.is_dc = true;
  Network net({bus("A", "1", BusType::Load), bus("B", "1", BusType::Load), bus("C", "2", BusType::Load),
               bus("C2", "2", BusType::Load), bus("D", "3", BusType::Load)},
              {line("ab", "A", "B"), dc, line("cc", "C", "C2"), lone});
  const Network out = drop_dc_elements(net);
  CHECK(out.lines().size() == 2);
  CHECK_FALSE(out.find_bus("D"));
  CHECK(connected_components(out).size() == 2);
  CHECK(drop_dc_elements(fixtures::five_bus()) == fixtures::five_bus());
}

TEST_CASE("loadability curve") {
  const LoadabilityParams params = LoadabilityParams::defaults();
  const VoltageClass& vc = params.lookup(345.0);
  CHECK(loadability_limit(0.0, 345.0, params) == doctest::Approx(vc.thermal_limit_mw));
  const double a = loadability_limit(400.0, 345.0, params);
  const double b = loadability_limit(800.0, 345.0, params);
  REQUIRE(a < vc.thermal_limit_mw);
  CHECK(b == doctest::Approx(a / 2.0));
  for (const auto& [kv, cls] : params.classes) {
    double previous = loadability_limit(0.0, kv, params);
    for (int i = 1; i <= 1000; ++i) {
      const double value = loadability_limit(i * 2.0, kv, params);
      CHECK(value <= previous);
      previous = value;
    }
  }
  LoadabilityParams empty;
  CHECK_THROWS_AS(loadability_limit(10.0, 230.0, empty), ConfigError);
  // Unknown voltages use the nearest class.
  CHECK(loadability_limit(0.0, 240.0, params) == doctest::Approx(params.lookup(230.0).thermal_limit_mw));
}

TEST_CASE("rating imputation") {
  const LoadabilityParams params = LoadabilityParams::defaults();
  const GeoPoint a{40, -100};
  Network net({bus("A", "1", BusType::Load, a), bus("B", "1", BusType::Load, north(a, 500)),
               bus("C", "1", BusType::Load, a)},
              {line("kept", "A", "B", 0.1, 400.0, 345.0), line("long", "A", "B", 0.1, std::nullopt, 345.0),
               line("xfmr", "A", "C", 0.1, std::nullopt, 345.0, LineKind::Transformer),
               line("zero", "A", "B", 0.1, 0.0, 345.0)});
  const Network out = impute_ratings(net, params);
  CHECK(*out.line("kept").rating == 400.0);
  CHECK(*out.line("xfmr").rating == doctest::Approx(params.lookup(345.0).thermal_limit_mw));
  CHECK(*out.line("long").rating < params.lookup(345.0).thermal_limit_mw);
  CHECK(*out.line("zero").rating == doctest::Approx(*out.line("long").rating));
}

TEST_CASE("reactance imputation") {
  const GeoPoint o{40, -100};
  SUBCASE("nearest length donor") {
    Network net({bus("O", "1", BusType::Load, o), bus("P50", "1", BusType::Load, north(o, 50)),
                 bus("P45", "1", BusType::Load, north(o, 45)), bus("P80", "1", BusType::Load, north(o, 80))},
                {line("miss", "O", "P50", std::nullopt), line("d45", "O", "P45", 0.02), line("d80", "O", "P80", 0.05)});
    const Network out = impute_reactances(net);
    CHECK(*out.line("miss").reactance == doctest::Approx(0.02));
    CHECK(*out.line("d80").reactance == 0.05);
  }
  SUBCASE("transformer median of three") {
    Network net({bus("A", "1", BusType::Load, o), bus("B", "1", BusType::Load, o)},
                {line("t1", "A", "B", 0.01, 100, 230, LineKind::Transformer),
                 line("t2", "A", "B", 0.03, 100, 230, LineKind::Transformer),
                 line("t3", "A", "B", 0.08, 100, 230, LineKind::Transformer),
                 line("tm", "A", "B", std::nullopt, 100, 230, LineKind::Transformer)});
    CHECK(*impute_reactances(net).line("tm").reactance == doctest::Approx(0.03));
  }
  SUBCASE("transformer median of two") {
    Network net({bus("A", "1", BusType::Load, o), bus("B", "1", BusType::Load, o)},
                {line("t1", "A", "B", 0.02, 100, 230, LineKind::Transformer),
                 line("t2", "A", "B", 0.04, 100, 230, LineKind::Transformer),
                 line("tm", "A", "B", std::nullopt, 100, 230, LineKind::Transformer)});
    CHECK(*impute_reactances(net).line("tm").reactance == doctest::Approx(0.03));
  }
  SUBCASE("other voltage is a fallback with a warning") {
    Network net({bus("A", "1", BusType::Load, o), bus("B", "1", BusType::Load, north(o, 10))},
                {line("d", "A", "B", 0.07, 100, 345), line("m", "A", "B", std::nullopt, 100, 230)});
    std::vector<std::string> warnings;
    CHECK(*impute_reactances(net, &warnings).line("m").reactance == doctest::Approx(0.07));
    CHECK(warnings.size() == 1);
  }
  SUBCASE("no donor at all") {
    Network net({bus("A", "1", BusType::Load, o), bus("B", "1", BusType::Load, o)},
                {line("m", "A", "B", std::nullopt)});
    CHECK_THROWS_AS(impute_reactances(net), ImputationError);
  }
}

TEST_CASE("neighborhood filter") {
  const GeoPoint o{40, -100};
  // Crossing line near the origin, a nearby bus, and a far barbell end.
  Network net({bus("a", "1", BusType::Load, o), bus("b", "2", BusType::Load, north(o, 10)),
               bus("c", "2", BusType::Load, north(o, 300)), bus("far1", "2", BusType::Load, north(o, 900)),
               bus("far2", "2", BusType::Load, north(o, 1000)), bus("d", "1", BusType::Load, north(o, 5))},
              {line("ab", "a", "b"), line("bc", "b", "c"), line("cf", "c", "far1"), line("ff", "far1", "far2"),
               line("ad", "a", "d"), line("db", "d", "b")});
  const Interface iface = build_interfaces(net).at(0);
  PrepConfig config;
  config.neighborhood_radius_km = 800.0;

  config.large_component_threshold = 100;
  CHECK(neighborhood_filter(net, iface, config) == net);

  config.large_component_threshold = 2;
  const Network out = neighborhood_filter(net, iface, config);
  CHECK(out.find_bus("c"));
  CHECK_FALSE(out.find_bus("far1"));
  CHECK_FALSE(out.find_bus("far2"));
}

TEST_CASE("neighborhood filter drops split-off pieces without crossing lines") {
  const GeoPoint o{40, -100};
  // The bridge bus sits out of range, so the right-hand cluster falls away.
  Network net({bus("a", "1", BusType::Load, o), bus("b", "2", BusType::Load, north(o, 10)),
               bus("bridge", "2", BusType::Load, north(o, 900)), bus("r1", "2", BusType::Load, north(o, 200)),
               bus("r2", "2", BusType::Load, north(o, 210))},
              {line("ab", "a", "b"), line("b-bridge", "b", "bridge"), line("bridge-r1", "bridge", "r1"),
               line("r1r2", "r1", "r2")});
  PrepConfig config;
  config.large_component_threshold = 2;
  const Network out = neighborhood_filter(net, build_interfaces(net).at(0), config);
  CHECK(out.buses().size() == 2);
  CHECK_FALSE(out.find_bus("r1"));
}

TEST_CASE("prepare_network output is solver ready and logs each step") {
  Line dc = line("dc", "A", "E", std::nullopt, std::nullopt);
  dc.is_dc = true;
  std::vector<Line> lines = fixtures::five_bus().lines();
  lines.push_back(dc);
  Network raw(fixtures::five_bus().buses(), lines);
  const PrepResult prep = prepare_network(raw, PrepConfig{});
  CHECK(validate_network(prep.network).empty());
  CHECK(prep.network == fixtures::five_bus());
  CHECK(prep.log.size() >= 5);
}

TEST_CASE("config validation") {
  PrepConfig config;
  config.boundary_buffer_km = -1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  LoadabilityParams params = LoadabilityParams::defaults();
  params.max_angle_deg = 95.0;
  CHECK_THROWS_AS(params.validate(), ConfigError);
}
