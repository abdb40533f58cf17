// Command-line front end: run, validate, ptdf and generate.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "itl/error.hpp"
#include "itl/io.hpp"
#include "itl/pipeline.hpp"
#include "itl/ptdf.hpp"
#include "itl/synthetic.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const itl::RunConfig config = itl::load_run_config(config_path);
  const itl::RunOutcome outcome = itl::run_pipeline(config);
  if (outcome.status == itl::ExitStatus::Fatal) {
    std::cerr << "itl: fatal: " << outcome.error << "\n";
  } else {
    std::cout << "wrote " << outcome.files.size() << " files to " << config.output_dir.string() << "\n";
    if (outcome.status == itl::ExitStatus::Partial)
      std::cerr << "itl: some solves failed; see run_manifest.json\n";
  }
  return static_cast<int>(outcome.status);
}

int cmd_validate(const std::string& config_path) {
  const itl::RunConfig config = itl::load_run_config(config_path);
  const itl::Network raw = itl::io::load_network(config.buses, config.lines, config.base_mva);
  const itl::ValidationReport before = itl::validate_network(raw);
  std::cout << "raw network: " << raw.buses().size() << " buses, " << raw.lines().size() << " lines, "
            << before.violations.size() << " issues\n";
  for (const auto& v : before.violations)
    std::cout << "  " << itl::to_string(v.kind) << " " << v.element << ": " << v.message << "\n";
  const itl::PrepResult prep = itl::prepare_network(raw, config.prep);
  for (const auto& entry : prep.log) std::cout << "prep: " << entry << "\n";
  std::cout << "prepared network: " << prep.network.buses().size() << " buses, " << prep.network.lines().size()
            << " lines, " << itl::build_interfaces(prep.network).size() << " interfaces; solver-ready\n";
  return 0;
}

int cmd_ptdf(const std::string& config_path, const std::string& slack, const std::string& output) {
  const itl::RunConfig config = itl::load_run_config(config_path);
  const itl::PrepResult prep = itl::load_and_prepare(config);
  const itl::PtdfMatrix ptdf = itl::compute_ptdf(prep.network, slack);
  if (output.empty()) {
    itl::io::write_ptdf_csv(ptdf, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw itl::Error("cannot write " + output);
    itl::io::write_ptdf_csv(ptdf, out);
  }
  return 0;
}

int cmd_generate(const std::string& dir, std::size_t buses, std::size_t zones, std::uint64_t seed) {
  itl::SyntheticGridOptions options;
  options.buses = buses;
  options.zones = zones;
  options.seed = seed;
  const itl::Network network = itl::generate_synthetic_grid(options);
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  itl::io::write_network(network, root / "buses.csv", root / "lines.csv");
  std::cout << "wrote " << network.buses().size() << " buses and " << network.lines().size() << " lines to " << dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interface transfer limits from a nodal DC network"};
  app.set_version_flag("--version", std::string(itl::kVersion));
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Full study: prep, n-0, n-1, aggregation, statistics");
  run->add_option("--config", config, "Run configuration file")->required();

  auto* validate = app.add_subcommand("validate", "Load and prepare the network, report issues");
  validate->add_option("--config", config, "Run configuration file")->required();

  std::string slack;
  std::string output;
  auto* ptdf = app.add_subcommand("ptdf", "Write the PTDF matrix of the prepared network");
  ptdf->add_option("--config", config, "Run configuration file")->required();
  ptdf->add_option("--slack", slack, "Slack bus id")->required();
  ptdf->add_option("--output", output, "CSV path (stdout when omitted)");

  std::string gen_dir;
  std::size_t gen_buses = 500;
  std::size_t gen_zones = 20;
  std::uint64_t gen_seed = itl::SyntheticGridOptions{}.seed;
  auto* generate = app.add_subcommand("generate", "Write a synthetic meshed test network");
  generate->add_option("--output", gen_dir, "Directory for buses.csv and lines.csv")->required();
  generate->add_option("--buses", gen_buses, "Number of buses");
  generate->add_option("--zones", gen_zones, "Number of zones");
  generate->add_option("--seed", gen_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config);
    if (*validate) return cmd_validate(config);
    if (*ptdf) return cmd_ptdf(config, slack, output);
    if (*generate) return cmd_generate(gen_dir, gen_buses, gen_zones, gen_seed);
  } catch (const std::exception& e) {
    std::cerr << "itl: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
