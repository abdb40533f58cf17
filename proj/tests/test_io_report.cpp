#include "doctest.h"

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "itl/csv.hpp"
#include "itl/error.hpp"
#include "itl/io.hpp"
#include "itl/report.hpp"
#include "itl/synthetic.hpp"

using namespace itl;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("shipped five-bus fixture loads as the example network") {
  const auto dir = fixtures::data_dir() / "five_bus";
  const Network net = io::load_network(dir / "buses.csv", dir / "lines.csv");
  CHECK(net == fixtures::five_bus());
  const RegionMapping regions = io::load_region_mapping(dir / "regions.csv");
  CHECK(regions.at("3") == "east");
}

TEST_CASE("network round trip is exact") {
  const auto dir = fixtures::scratch("roundtrip");
  SyntheticGridOptions options;
  options.buses = 120;
  options.zones = 6;
  const Network net = generate_synthetic_grid(options);
  io::write_network(net, dir / "b.csv", dir / "l.csv");
  CHECK(io::load_network(dir / "b.csv", dir / "l.csv") == net);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomNetworkOptions r;
    r.seed = seed;
    const Network small = generate_random_network(r);
    io::write_network(small, dir / "b.csv", dir / "l.csv");
    CHECK(io::load_network(dir / "b.csv", dir / "l.csv") == small);
  }
}

TEST_CASE("blank fields and empty line files") {
  const auto dir = fixtures::scratch("blanks");
  write_text(dir / "b.csv", "id,zone,type,lat,lon\nA,1,gen,40,-100\nB,2,load,,\nC,2,trans,41.5,-99\n");
  write_text(dir / "l.csv", "id,from,to,reactance_pu,rating_mw,voltage_kv,kind,is_dc\n"
                            "x,A,B,0.1,,230,line,false\n"
                            "y,B,C,,150,345,transformer,\n"
                            "z,A,C,0.2,100,500,line,1\n");
  const Network net = io::load_network(dir / "b.csv", dir / "l.csv");
  CHECK(net.bus("A").type == BusType::Generator);
  CHECK_FALSE(net.bus("B").location.has_value());
  CHECK(net.bus("C").type == BusType::Transmission);
  CHECK_FALSE(net.line("x").rating.has_value());
  CHECK_FALSE(net.line("y").reactance.has_value());
  CHECK(net.line("y").kind == LineKind::Transformer);
  CHECK(net.line("z").is_dc);

  write_text(dir / "empty.csv", "id,from,to,reactance_pu,rating_mw,voltage_kv,kind,is_dc\n");
  const Network buses_only = io::load_network(dir / "b.csv", dir / "empty.csv");
  CHECK(buses_only.lines().empty());
  CHECK(build_interfaces(buses_only).empty());
}

TEST_CASE("schema violations name file, row and column") {
  const auto dir = fixtures::scratch("schema");
  write_text(dir / "b.csv", "id,zone,type,lat,lon\nA,1,gen,40,-100\nB,1,wizard,,\n");
  write_text(dir / "l.csv", "id,from,to,reactance_pu,rating_mw,voltage_kv,kind,is_dc\n");
  try {
    io::load_network(dir / "b.csv", dir / "l.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("b.csv:3") != std::string::npos);
    CHECK(what.find("type") != std::string::npos);
  }
  write_text(dir / "b.csv", "id,zone,type,lat,lon\nA,1,gen,40,-100\n");
  write_text(dir / "l.csv", "id,from,to,reactance_pu,rating_mw,voltage_kv,kind,is_dc\nq,A,A,abc,1,230,line,false\n");
  CHECK_THROWS_AS(io::load_network(dir / "b.csv", dir / "l.csv"), ParseError);
  write_text(dir / "l.csv", "id,from,to,reactance_pu\n");
  CHECK_THROWS_AS(io::load_network(dir / "b.csv", dir / "l.csv"), ParseError);
  CHECK_THROWS_AS(io::load_network(dir / "missing.csv", dir / "l.csv"), ParseError);
}

TEST_CASE("csv helpers") {
  CHECK(csv::split_line(R"(a,"b,c",  d ,"e""f")") == std::vector<std::string>{"a", "b,c", "d", "e\"f"});
  CHECK(csv::escape("x,y") == "\"x,y\"");
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::fixed(-0.0001, 3) == "0.000");
  CHECK(csv::fixed(718.6842, 3) == "718.684");
  CHECK(std::stod(csv::exact(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("PTDF csv") {
  std::ostringstream out;
  io::write_ptdf_csv(compute_ptdf(fixtures::five_bus(), "A"), out, 4);
  const std::string text = out.str();
  CHECK(text.starts_with("line,A,B,C,D,E\n"));
  CHECK(text.find("A|B,0.0000,-0.6698,-0.5429,-0.1939,-0.0344") != std::string::npos);
}

TEST_CASE("itl rows and summary statistics") {
  const Network net = fixtures::five_bus();
  const auto results = compute_all_contingencies(net, StudyOptions{});
  const auto rows = itl_rows(results, true);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].interface_id == "1||2");
  CHECK(rows[0].level == Level::N0);
  CHECK(rows[0].itl_mw == 718.684);
  CHECK(rows[1].level == Level::N1);
  CHECK(rows[1].removed_line == "C|D");

  const SummaryStats stats = compute_summary(rows);
  CHECK(stats.get("itl_to_rating_sum", "n-0", "forward", "1||2") == doctest::Approx(0.898355).epsilon(1e-6));
  CHECK(stats.get("direction_ratio", "n-0", "both", "1||2") == doctest::Approx(1.0));
  CHECK(stats.get("fraction_direction_ratio_le_1.05", "n-0", "both") == 1.0);
  CHECK(stats.get("fraction_zero_itl", "n-1", "forward") == doctest::Approx(2.0 / 3.0));
  CHECK(stats.get("interface_count", "n-0", "both") == 3.0);
  for (const auto& row : stats.rows)
    if (row.metric == "itl_to_rating_sum") CHECK(row.value <= 1.0 + 1e-6);

  // Statistics are reproducible from the written file alone.
  const auto dir = fixtures::scratch("itl_csv");
  {
    std::ofstream out(dir / "itl.csv");
    write_itl_csv(rows, out);
  }
  const auto reread = read_itl_csv(dir / "itl.csv");
  REQUIRE(reread.size() == rows.size());
  CHECK(reread[0].binding_lines == rows[0].binding_lines);
  std::ostringstream a, b;
  write_stats_csv(stats, a);
  write_stats_csv(compute_summary(reread), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("direction ratio uses the higher over the lower limit") {
  std::vector<ItlRow> rows(2);
  rows[0] = {"a||b", "forward", Level::N0, 300.0, 400.0, "", {}, "ok"};
  rows[1] = {"a||b", "reverse", Level::N0, 100.0, 400.0, "", {}, "ok"};
  const SummaryStats stats = compute_summary(rows);
  CHECK(stats.get("direction_ratio", "n-0", "both", "a||b") == doctest::Approx(3.0));
  CHECK(stats.get("median_itl_to_rating_sum", "n-0", "higher") == doctest::Approx(0.75));
  CHECK(stats.get("median_itl_to_rating_sum", "n-0", "lower") == doctest::Approx(0.25));
  CHECK(stats.get("fraction_direction_ratio_le_1.05", "n-0", "both") == 0.0);
}
