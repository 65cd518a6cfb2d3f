// skyplan: plan, check, sweep and self-test from the command line.

#include "skyplan/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("skyplan");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SKYPLAN_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Common {
  std::string scenario;
  std::string seed_layout;
  skyplan::cli::RunFlags flags;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("scenario", c.scenario, "Scenario JSON file");
  app->add_option("--seed-layout", c.seed_layout, "Bundled stand-in layout instead of a file")
      ->check(CLI::IsMember({"map1", "map2"}));
  app->add_option("--gamma-min", c.flags.gamma_min, "Override the SINR threshold (linear)");
  app->add_option("--lambda", c.flags.lambda, "Override the binary penalty weight");
  app->add_option("--epsilon", c.flags.epsilon, "SCA stopping tolerance on the fractional change");
  app->add_option("--max-iter", c.flags.max_iterations, "SCA iteration cap");
  app->add_option("--trust-region", c.flags.trust_region, "Per-slot position trust radius in meters");
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  namespace cli = skyplan::cli;

  CLI::App app{"Energy-aware trajectory planning under SINR connectivity constraints"};
  app.require_subcommand(1);

  Common plan_c, check_c, sweep_c;
  std::string plan_out, sweep_out, gammas;
  bool oracle = false;
  std::vector<std::string> probes;

  auto* plan = app.add_subcommand("plan", "Plan a trajectory and write trace files");
  add_common(plan, plan_c);
  plan->add_option("--out", plan_out, "Output directory")->required();

  auto* check = app.add_subcommand("check", "Connectivity feasibility certificate");
  add_common(check, check_c);
  check->add_flag("--oracle", oracle, "Also run the grid oracle and report agreement");

  auto* sweep = app.add_subcommand("sweep", "Solve over a list of SINR thresholds");
  add_common(sweep, sweep_c);
  sweep->add_option("--gammas", gammas, "Comma-separated thresholds")->required();
  sweep->add_option("--out", sweep_out, "Output directory");

  auto* selftest = app.add_subcommand("selftest", "Numerical property probes");
  selftest->add_option("--probes", probes, "Probe groups: derivatives, concavity, surrogate")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::exit_code::usage;
  }

  try {
    if (*selftest) {
      cli::SelftestOptions opt;
      opt.groups = probes;
      return cli::cmd_selftest(opt, std::cout, std::cerr);
    }
    if (*plan) {
      const auto s = cli::resolve_scenario(plan_c.scenario, plan_c.seed_layout);
      return cli::cmd_plan(s, plan_c.flags, plan_out, std::cout, std::cerr);
    }
    if (*check) {
      const auto s = cli::resolve_scenario(check_c.scenario, check_c.seed_layout);
      return cli::cmd_check(s, check_c.flags, oracle, std::cout, std::cerr);
    }
    if (*sweep) {
      const auto s = cli::resolve_scenario(sweep_c.scenario, sweep_c.seed_layout);
      std::vector<double> list;
      try {
        list = parse_list(gammas);
      } catch (const std::exception& e) {
        std::cerr << "--gammas: " << e.what() << '\n';
        return cli::exit_code::usage;
      }
      return cli::cmd_sweep(s, sweep_c.flags, list, sweep_out, std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return cli::exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code::failure;
  }
  return cli::exit_code::usage;
}
