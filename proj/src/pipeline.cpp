#include "itl/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "itl/aggregation.hpp"
#include "itl/csv.hpp"
#include "itl/error.hpp"
#include "itl/io.hpp"
#include "itl/report.hpp"

namespace itl {

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  o.prep = prep;
  o.use_neighborhood_filter = use_neighborhood_filter;
  o.solver = solver;
  o.directions = directions;
  o.slack_bus = slack_bus;
  o.threads = threads;
  return o;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<GeoPoint> parse_polygon(const std::string& value) {
  nlohmann::json ring;
  try {
    ring = nlohmann::json::parse(value);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config key 'polygon': ") + e.what());
  }
  if (!ring.is_array()) throw ConfigError("config key 'polygon': expected [[lon, lat], ...]");
  std::vector<GeoPoint> points;
  for (const auto& p : ring) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ConfigError("config key 'polygon': each vertex must be [lon, lat]");
    points.push_back({p[1].get<double>(), p[0].get<double>()});
  }
  if (points.size() >= 2 && points.front() == points.back()) points.pop_back();
  return points;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::map<double, VoltageClass> custom_classes;
  bool have_buses = false;
  bool have_lines = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_number) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (key == "buses") {
      cfg.buses = resolve(base_dir, value);
      have_buses = true;
    } else if (key == "lines") {
      cfg.lines = resolve(base_dir, value);
      have_lines = true;
    } else if (key == "regions") {
      if (!value.empty()) cfg.regions = resolve(base_dir, value);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(base_dir, value);
    } else if (key == "polygon") {
      cfg.prep.boundary_polygon = parse_polygon(value);
    } else if (key == "base_mva") {
      cfg.base_mva = parse_double(key, value);
    } else if (key == "boundary_buffer_km") {
      cfg.prep.boundary_buffer_km = parse_double(key, value);
    } else if (key == "neighborhood_radius_km") {
      cfg.prep.neighborhood_radius_km = parse_double(key, value);
    } else if (key == "large_component_threshold") {
      const double v = parse_double(key, value);
      if (v < 0) throw ConfigError("large_component_threshold must be >= 0");
      cfg.prep.large_component_threshold = static_cast<std::size_t>(v);
    } else if (key == "neighborhood_filter") {
      cfg.use_neighborhood_filter = parse_bool(key, value);
    } else if (key == "max_angle_deg") {
      cfg.prep.loadability.max_angle_deg = parse_double(key, value);
    } else if (key == "max_voltage_drop_frac") {
      cfg.prep.loadability.max_voltage_drop_frac = parse_double(key, value);
    } else if (key == "min_length_km") {
      cfg.prep.loadability.min_length_km = parse_double(key, value);
    } else if (key.starts_with("loadability.")) {
      const double kv = parse_double(key, key.substr(12));
      std::vector<double> parts;
      std::istringstream fields(value);
      std::string field;
      while (std::getline(fields, field, ',')) parts.push_back(parse_double(key, trim(field)));
      if (parts.size() != 3) throw ConfigError("config key '" + key + "': expected thermal_mw, x_ohm_per_km, sil_mw");
      custom_classes[kv] = {parts[0], parts[1], parts[2]};
    } else if (key == "run_n1") {
      cfg.run_n1 = parse_bool(key, value);
    } else if (key == "directions") {
      if (value == "both") {
        cfg.directions = {Direction::Forward, Direction::Reverse};
      } else if (value == "forward") {
        cfg.directions = {Direction::Forward};
      } else if (value == "reverse") {
        cfg.directions = {Direction::Reverse};
      } else {
        throw ConfigError("config key 'directions': expected both, forward or reverse");
      }
    } else if (key == "slack_bus") {
      cfg.slack_bus = value;
    } else if (key == "feasibility_tol") {
      cfg.solver.feasibility_tol = parse_double(key, value);
    } else if (key == "optimality_tol") {
      cfg.solver.optimality_tol = parse_double(key, value);
    } else if (key == "threads") {
      const double v = parse_double(key, value);
      if (v < 1) throw ConfigError("threads must be >= 1");
      cfg.threads = static_cast<unsigned>(v);
    } else if (key == "dump_lp") {
      cfg.dump_lp = parse_bool(key, value);
    } else if (key == "record_timings") {
      cfg.record_timings = parse_bool(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
  }

  if (!custom_classes.empty()) cfg.prep.loadability.classes = std::move(custom_classes);
  if (!have_buses || !have_lines) throw ConfigError("config must set both 'buses' and 'lines'");
  if (!(cfg.solver.feasibility_tol > 0.0) || !(cfg.solver.optimality_tol > 0.0))
    throw ConfigError("solver tolerances must be > 0");
  if (!(cfg.base_mva > 0.0)) throw ConfigError("base_mva must be > 0");
  cfg.prep.validate();
  for (const auto* p : {&cfg.buses, &cfg.lines}) {
    if (!std::filesystem::exists(*p)) throw ConfigError("input file not found: " + p->string());
  }
  if (cfg.regions && !std::filesystem::exists(*cfg.regions))
    throw ConfigError("input file not found: " + cfg.regions->string());
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

PrepResult load_and_prepare(const RunConfig& config) {
  const Network raw = io::load_network(config.buses, config.lines, config.base_mva);
  return prepare_network(raw, config.prep);
}

namespace {

std::string file_stem(const std::string& interface_id, Direction direction, Level level) {
  std::string stem;
  for (std::size_t i = 0; i < interface_id.size(); ++i) {
    const char c = interface_id[i];
    if (interface_id.compare(i, 2, "||") == 0) {
      stem += "__";
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      stem += c;
    } else {
      stem += '_';
    }
  }
  return stem + "_" + std::string(to_string(direction)) + (level == Level::N0 ? "_n0" : "_n1");
}

std::string flows_csv(const ItlResult& r, const Network& network) {
  std::ostringstream out;
  csv::write_row(out, {"line", "flow_mw", "rating_mw", "dual"});
  for (const auto& [line, flow] : r.flows) {
    const double rating = network.line(line).rating.value_or(0.0);
    auto dual = r.rating_duals.find(line);
    csv::write_row(out, {line, csv::fixed(flow, 3), csv::fixed(rating, 3),
                         csv::fixed(dual == r.rating_duals.end() ? 0.0 : dual->second, 6)});
  }
  return out.str();
}

std::string injections_csv(const ItlResult& r) {
  std::ostringstream out;
  csv::write_row(out, {"bus", "injection_mw"});
  for (const auto& [bus, g] : r.injections) csv::write_row(out, {bus, csv::fixed(g, 3)});
  return out.str();
}

std::string optional_mw(const std::optional<double>& v) { return v ? csv::fixed(*v, 3) : ""; }

std::string optional_flag(const std::optional<bool>& v) {
  if (!v) return "";
  return *v ? "true" : "false";
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["buses"] = c.buses.string();
  j["lines"] = c.lines.string();
  j["regions"] = c.regions ? c.regions->string() : "";
  j["base_mva"] = c.base_mva;
  j["boundary_buffer_km"] = c.prep.boundary_buffer_km;
  j["neighborhood_radius_km"] = c.prep.neighborhood_radius_km;
  j["large_component_threshold"] = c.prep.large_component_threshold;
  j["neighborhood_filter"] = c.use_neighborhood_filter;
  j["has_polygon"] = c.prep.boundary_polygon.has_value();
  j["max_angle_deg"] = c.prep.loadability.max_angle_deg;
  j["max_voltage_drop_frac"] = c.prep.loadability.max_voltage_drop_frac;
  j["min_length_km"] = c.prep.loadability.min_length_km;
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& [kv, vc] : c.prep.loadability.classes)
    classes.push_back({{"kv", kv}, {"thermal_mw", vc.thermal_limit_mw}, {"x_ohm_per_km", vc.reactance_ohm_per_km},
                       {"sil_mw", vc.sil_mw}});
  j["loadability"] = classes;
  j["run_n1"] = c.run_n1;
  nlohmann::json dirs = nlohmann::json::array();
  for (Direction d : c.directions) dirs.push_back(std::string(to_string(d)));
  j["directions"] = dirs;
  j["slack_bus"] = c.slack_bus;
  j["feasibility_tol"] = c.solver.feasibility_tol;
  j["optimality_tol"] = c.solver.optimality_tol;
  j["dump_lp"] = c.dump_lp;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

RunOutcome run_pipeline(const RunConfig& config) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); };
  const auto started = Clock::now();
  nlohmann::json timings;

  RunOutcome outcome;
  std::map<std::filesystem::path, std::string> files;  // relative path -> content
  try {
    auto t = Clock::now();
    const Network raw = io::load_network(config.buses, config.lines, config.base_mva);
    PrepResult prep = prepare_network(raw, config.prep);
    const Network& network = prep.network;
    timings["prep_s"] = seconds_since(t);

    const StudyOptions options = config.study_options();
    t = Clock::now();
    std::vector<ContingencyResult> results;
    if (config.run_n1) {
      results = compute_all_contingencies(network, options);
    } else {
      for (auto& r : compute_all_itls(network, options)) {
        ContingencyResult cr;
        cr.interface_id = r.interface_id;
        cr.direction = r.direction;
        cr.n0 = std::move(r);
        results.push_back(std::move(cr));
      }
    }
    timings["solve_s"] = seconds_since(t);

    const std::vector<ItlRow> rows = itl_rows(results, config.run_n1);
    {
      std::ostringstream out;
      write_itl_csv(rows, out);
      files["itl.csv"] = out.str();
    }
    {
      std::ostringstream out;
      write_stats_csv(compute_summary(rows), out);
      files["stats.csv"] = out.str();
    }

    nlohmann::json failures = nlohmann::json::array();
    std::size_t solves = 0;
    auto record = [&](const ItlResult& r, Level level) {
      ++solves;
      const std::string stem = file_stem(r.interface_id, r.direction, level);
      if (r.status == ResultStatus::Failed) {
        failures.push_back({{"interface", r.interface_id},
                            {"direction", std::string(to_string(r.direction))},
                            {"level", std::string(to_string(level))},
                            {"notes", r.notes}});
        return;
      }
      if (r.status != ResultStatus::Ok) return;
      files[std::filesystem::path("flows") / (stem + ".csv")] = flows_csv(r, network);
      files[std::filesystem::path("injections") / (stem + ".csv")] = injections_csv(r);
    };
    for (const auto& cr : results) {
      record(cr.n0, Level::N0);
      if (config.run_n1) record(cr.n1, Level::N1);
    }

    if (config.dump_lp) {
      for (const auto& iface : build_interfaces(network)) {
        for (Direction d : config.directions) {
          const auto islands = study_islands(network, iface, options);
          for (std::size_t k = 0; k < islands.size(); ++k) {
            const auto& island = islands[k];
            const PtdfMatrix ptdf = compute_ptdf(island, island.find_bus(config.slack_bus) ? config.slack_bus : "");
            std::ostringstream out;
            lp::write_mps(build_itl_lp(ptdf, restrict_interface(iface, island), d, island), out);
            std::string stem = file_stem(iface.id(), d, Level::N0);
            if (islands.size() > 1) stem += "_island" + std::to_string(k);
            files[std::filesystem::path("lp") / (stem + ".mps")] = out.str();
          }
        }
      }
    }

    if (config.regions) {
      t = Clock::now();
      const RegionMapping mapping = io::load_region_mapping(*config.regions);
      std::vector<ItlResult> zonal_n0, zonal_n1, direct_n0, direct_n1;
      for (const auto& cr : results) {
        zonal_n0.push_back(cr.n0);
        if (config.run_n1) zonal_n1.push_back(cr.n1);
      }
      std::vector<ItlRow> region_rows;
      if (config.run_n1) {
        auto direct = aggregate_direct_contingencies(network, mapping, options);
        for (const auto& cr : direct) {
          direct_n0.push_back(cr.n0);
          direct_n1.push_back(cr.n1);
        }
        region_rows = itl_rows(direct, true);
      } else {
        direct_n0 = aggregate_direct(network, mapping, options);
        region_rows = itl_rows(direct_n0);
      }
      for (const auto& r : direct_n0) {
        if (r.status == ResultStatus::Failed)
          failures.push_back({{"interface", r.interface_id},
                              {"direction", std::string(to_string(r.direction))},
                              {"level", "n-0"},
                              {"scope", "region"},
                              {"notes", r.notes}});
      }
      const auto summed_n0 = aggregate_summed(zonal_n0, mapping);
      const auto summed_n1 = config.run_n1 ? aggregate_summed(zonal_n1, mapping) : std::vector<SummedItl>{};
      const auto comparison = compare_direct_vs_summed(direct_n0, direct_n1, summed_n0, summed_n1);

      std::ostringstream region_out;
      write_itl_csv(region_rows, region_out);
      files["region_itl.csv"] = region_out.str();

      std::ostringstream agg;
      csv::write_row(agg, {"region_a", "region_b", "direction", "direct_n0_mw", "direct_n1_mw", "summed_n0_mw",
                           "summed_n1_mw", "rating_sum_mw", "summed_n0_ge_direct", "summed_n1_lt_direct", "partial"});
      for (const auto& row : comparison) {
        csv::write_row(agg, {row.region_a, row.region_b, std::string(to_string(row.direction)),
                             optional_mw(row.direct_n0), optional_mw(row.direct_n1), optional_mw(row.summed_n0),
                             optional_mw(row.summed_n1), csv::fixed(row.rating_sum_mw, 3),
                             optional_flag(row.summed_n0_at_least_direct()),
                             optional_flag(row.summed_n1_below_direct()), row.partial ? "true" : "false"});
      }
      files["aggregation.csv"] = agg.str();
      timings["aggregation_s"] = seconds_since(t);
    }

    outcome.status = failures.empty() ? ExitStatus::Success : ExitStatus::Partial;

    nlohmann::json manifest;
    manifest["tool"] = "itl";
    manifest["version"] = std::string(kVersion);
    manifest["config"] = config_echo(config);
    manifest["network"] = {{"raw_buses", raw.buses().size()},
                           {"raw_lines", raw.lines().size()},
                           {"buses", network.buses().size()},
                           {"lines", network.lines().size()},
                           {"zones", network.zones().size()},
                           {"islands", connected_components(network).size()},
                           {"interfaces", build_interfaces(network).size()}};
    manifest["prep_log"] = prep.log;
    manifest["solves"] = {{"total", solves}, {"failed", failures.size()}};
    manifest["failures"] = failures;
    manifest["status"] = outcome.status == ExitStatus::Success ? "success" : "partial";
    nlohmann::json listed = nlohmann::json::array();
    for (const auto& [path, content] : files) listed.push_back(path.generic_string());
    listed.push_back("run_manifest.json");
    manifest["files"] = listed;
    if (config.record_timings) {
      timings["total_s"] = seconds_since(started);
      manifest["timings"] = timings;
    }
    files["run_manifest.json"] = manifest.dump(2) + "\n";

    std::filesystem::create_directories(config.output_dir);
    for (const auto& [path, content] : files) {
      write_file(config.output_dir / path, content);
      outcome.files.push_back(config.output_dir / path);
    }
  } catch (const std::exception& e) {
    outcome.status = ExitStatus::Fatal;
    outcome.error = e.what();
    nlohmann::json report = {{"status", "fatal"}, {"error", e.what()}, {"version", std::string(kVersion)}};
    try {
      std::filesystem::create_directories(config.output_dir);
      write_file(config.output_dir / "error.json", report.dump(2) + "\n");
      outcome.files.push_back(config.output_dir / "error.json");
    } catch (const std::exception&) {
      // The error is still returned to the caller.
    }
  }
  return outcome;
}

}  // namespace itl
