#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"
#include "macsi/version.hpp"

namespace {

// Adds the flag set shared by every subcommand.
void add_common(CLI::App* cmd, macsi::cli::RunConfig& cfg) {
  cmd->add_option("--spec", cfg.spec_path, "Channel-spec file (JSON)")->required();
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--tol", cfg.tol, "Tolerance override for this subcommand");
}

std::pair<int, int> parse_messages(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--messages", "expected two sizes as A,B");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--messages", "expected two sizes as A,B");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity regions of finite-state MACs with quantized causal CSI"};
  app.set_version_flag("--version", std::string("macsi ") + macsi::kVersion);
  app.require_subcommand(1);

  macsi::cli::RunConfig cfg;
  std::string messages;

  CLI::App* region = app.add_subcommand(
      "region", "Approximate the capacity region and export the polygon");
  add_common(region, cfg);
  region->add_option("--out", cfg.out_path, "Polygon output path");
  region->add_option("--grid", cfg.search.grid_resolution, "Simplex grid resolution");
  region->add_option("--samples", cfg.search.sample_count,
                     "Sampled policies when enumeration is capped");
  region->add_option("--restarts", cfg.search.restarts, "Ascent restarts per direction");

  CLI::App* pentagon =
      app.add_subcommand("pentagon", "Rate bounds of a single team policy");
  add_common(pentagon, cfg);
  pentagon->add_option("--policy", cfg.policy_path, "Policy file (JSON)")->required();

  CLI::App* equiv = app.add_subcommand(
      "equiv-check", "Verify the strategy-space mutual-information identities");
  add_common(equiv, cfg);
  equiv->add_option("--samples", cfg.sample_policies, "Random policies to check");

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Run the converse factorization and rate-bound sweeps");
  add_common(oracle, cfg);
  oracle->add_option("--encoders", cfg.random_encoders,
                     "Random encoder pairs for the factorization sweep");
  oracle->add_option("--block-n", cfg.block_n, "Restrict sweeps to one block length");
  oracle->add_option("--messages", messages, "Restrict sweeps to one size pair A,B");

  CLI::App* best =
      app.add_subcommand("best-code", "Exhaustive minimal-error code search");
  add_common(best, cfg);
  best->add_option("--block-n", cfg.block_n, "Block length")->required();
  best->add_option("--messages", messages, "Message set sizes A,B")->required();

  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo error rate of the best exhaustive code");
  add_common(sim, cfg);
  sim->add_option("--block-n", cfg.block_n, "Block length")->required();
  sim->add_option("--messages", messages, "Message set sizes A,B")->required();
  sim->add_option("--trials", cfg.trials, "Simulation trials");

  CLI11_PARSE(app, argc, argv);

  if (!messages.empty()) {
    try {
      std::tie(cfg.messages_a, cfg.messages_b) = parse_messages(messages);
    } catch (const CLI::Error& e) {
      return app.exit(e);
    }
  }

  if (region->parsed()) cfg.command = macsi::cli::Command::region;
  if (pentagon->parsed()) cfg.command = macsi::cli::Command::pentagon;
  if (equiv->parsed()) cfg.command = macsi::cli::Command::equiv_check;
  if (oracle->parsed()) cfg.command = macsi::cli::Command::oracle_check;
  if (best->parsed()) cfg.command = macsi::cli::Command::best_code;
  if (sim->parsed()) cfg.command = macsi::cli::Command::simulate;

  return macsi::cli::run(cfg, std::cout, std::cerr);
}
