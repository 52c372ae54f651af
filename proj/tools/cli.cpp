#include "cli.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <vector>

#include "macsi/equivalence.hpp"
#include "macsi/errors.hpp"
#include "macsi/io.hpp"
#include "macsi/oracle.hpp"
#include "macsi/region.hpp"
#include "macsi/rng.hpp"
#include "macsi/version.hpp"

namespace macsi::cli {

namespace {

MacModel load_model(const RunConfig& cfg, std::ostream& err) {
  if (cfg.spec_path.empty()) throw ValidationError("--spec is required");
  LoadedModel loaded = load_channel_spec(cfg.spec_path);
  for (const std::string& w : loaded.warnings) err << "warning: " << w << "\n";
  return std::move(loaded.model);
}

int run_region(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  SearchConfig search = cfg.search;
  search.seed = cfg.seed;
  if (cfg.tol >= 0.0) search.ascent_tol = cfg.tol;

  const RegionResult result = capacity_region(model, search);
  const std::string path = cfg.out_path.empty() ? "region_polygon.txt" : cfg.out_path;
  write_text_file(path, format_polygon(result.region, search.seed));

  out << "policies evaluated: " << result.policies_evaluated
      << (result.enumerated ? " (grid enumeration)" : " (simplex sampling)") << "\n";
  out << "polygon vertices: " << result.region.vertices().size() << " -> " << path
      << "\n";
  out << "direction  lambda_a   lambda_b   hull_support  ascent_value  gap\n";
  for (std::size_t k = 0; k < result.directions.size(); ++k) {
    const DirectionDiagnostic& d = result.directions[k];
    std::ostringstream line;
    line << std::setw(9) << k << "  " << std::fixed << std::setprecision(6) << d.la
         << "   " << d.lb << "   " << std::setw(12) << d.hull_support << "  "
         << std::setw(12) << d.ascent_value << "  " << std::scientific
         << std::setprecision(2) << d.gap;
    out << line.str() << "\n";
  }
  return kOk;
}

int run_pentagon(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  if (cfg.policy_path.empty()) throw ValidationError("--policy is required");
  const TeamPolicy policy = load_team_policy(cfg.policy_path, model);
  const Pentagon p = pentagon_of_policy(model, policy);
  out << format_double(p.i_a()) << " " << format_double(p.i_b()) << " "
      << format_double(p.i_sum()) << "\n";
  return kOk;
}

int run_equiv_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  const double threshold = cfg.tol >= 0.0 ? cfg.tol : 1e-9;

  double max_dev = check_mi_equalities(model, uniform_policy(model)).max_deviation();
  for (const TeamPolicy& pi : sample_policies(model, cfg.sample_policies, cfg.seed))
    max_dev = std::max(max_dev, check_mi_equalities(model, pi).max_deviation());

  const bool pass = max_dev <= threshold;
  out << "policies checked: " << cfg.sample_policies + 1 << " (uniform + sampled, seed "
      << cfg.seed << ")\n";
  out << "max identity deviation: " << format_double(max_dev) << " (threshold "
      << format_double(threshold) << ")\n";
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kOk : kCheckFailed;
}

int run_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  const double threshold = cfg.tol >= 0.0 ? cfg.tol : 1e-12;

  // Factorization sweep: random encoder pairs over the requested cells.
  std::vector<std::tuple<int, int, int>> cells;  // (n, wa, wb)
  const std::vector<int> block_lengths =
      cfg.block_n > 0 ? std::vector<int>{cfg.block_n} : std::vector<int>{1, 2, 3};
  if (cfg.messages_a > 0 && cfg.messages_b > 0) {
    for (int n : block_lengths) cells.emplace_back(n, cfg.messages_a, cfg.messages_b);
  } else {
    for (int n : block_lengths)
      for (int wa : {1, 2, 4})
        for (int wb : {1, 2, 4}) cells.emplace_back(n, wa, wb);
  }
  Rng rng(cfg.seed);
  double max_dev = 0.0;
  int pairs = 0;
  for (int i = 0; i < cfg.random_encoders; ++i) {
    const auto& [n, wa, wb] = cells[static_cast<std::size_t>(i) % cells.size()];
    const BlockEncoder ea = random_encoder(model, Side::A, n, wa, rng);
    const BlockEncoder eb = random_encoder(model, Side::B, n, wb, rng);
    max_dev = std::max(max_dev, check_factorization(model, ea, eb));
    ++pairs;
  }
  const bool factor_pass = max_dev <= threshold;
  out << "factorization sweep: " << pairs << " random encoder pairs, max deviation "
      << format_double(max_dev) << " (threshold " << format_double(threshold) << "): "
      << (factor_pass ? "PASS" : "FAIL") << "\n";

  // Rate-bound sweep: exhaustive codes with MAP decoders at small sizes.
  std::vector<std::tuple<int, int, int>> sweep;
  if (cfg.block_n > 0 && cfg.messages_a > 0 && cfg.messages_b > 0) {
    sweep.emplace_back(cfg.block_n, cfg.messages_a, cfg.messages_b);
  } else {
    sweep.emplace_back(cfg.block_n > 0 ? cfg.block_n : 1, 2, 2);
  }
  std::uint64_t codes = 0;
  std::uint64_t violations = 0;
  for (const auto& [n, wa, wb] : sweep) {
    const double rate_a = std::log2(static_cast<double>(wa)) / n;
    const double rate_b = std::log2(static_cast<double>(wb)) / n;
    for_each_encoder_pair(model, n, wa, wb, kEncoderPairCap,
                          [&](const BlockEncoder& ea, const BlockEncoder& eb) {
                            BlockCode code{ea, eb, map_decoder(model, ea, eb)};
                            const FanoBounds fb = fano_bounds(model, code);
                            ++codes;
                            if (fb.error_probability >= 0.5) return;
                            constexpr double slack = 1e-9;
                            if (rate_a > fb.bound_a + slack ||
                                rate_b > fb.bound_b + slack ||
                                rate_a + rate_b > fb.bound_sum + slack)
                              ++violations;
                          });
  }
  out << "rate-bound sweep: " << codes << " codes checked, violations: " << violations
      << ": " << (violations == 0 ? "PASS" : "FAIL") << "\n";

  return (factor_pass && violations == 0) ? kOk : kCheckFailed;
}

void print_encoder(std::ostream& out, const char* name, const BlockEncoder& enc) {
  out << name << ": messages " << enc.message_count << ", block length "
      << enc.block_length << "\n";
  for (int t = 1; t <= enc.block_length; ++t) {
    const auto& map = enc.maps[static_cast<std::size_t>(t - 1)];
    const std::size_t hist = map.size() / static_cast<std::size_t>(enc.message_count);
    for (int w = 0; w < enc.message_count; ++w) {
      out << "  t=" << t << " w=" << w << ":";
      for (std::size_t h = 0; h < hist; ++h)
        out << " " << static_cast<int>(map[static_cast<std::size_t>(w) * hist + h]);
      out << "\n";
    }
  }
}

int run_best_code(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  if (cfg.block_n < 1 || cfg.messages_a < 1 || cfg.messages_b < 1)
    throw ValidationError("best-code requires --block-n and --messages A,B");

  const BestCodeResult best =
      brute_force_best_code(model, cfg.block_n, cfg.messages_a, cfg.messages_b);
  out << "pairs searched: " << best.pairs_searched << "\n";
  out << "rate pair: " << format_double(std::log2(cfg.messages_a) / cfg.block_n) << " "
      << format_double(std::log2(cfg.messages_b) / cfg.block_n) << " bits/use\n";
  out << "minimal error probability: " << format_double(best.error_probability) << "\n";
  print_encoder(out, "encoder a", best.code.enc_a);
  print_encoder(out, "encoder b", best.code.enc_b);
  return kOk;
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MacModel model = load_model(cfg, err);
  if (cfg.block_n < 1 || cfg.messages_a < 1 || cfg.messages_b < 1)
    throw ValidationError("simulate requires --block-n and --messages A,B");

  const BestCodeResult best =
      brute_force_best_code(model, cfg.block_n, cfg.messages_a, cfg.messages_b);
  const double exact = exact_error_probability(model, best.code);
  const double empirical = simulate_block(model, best.code, cfg.trials, cfg.seed);
  out << "exact error probability: " << format_double(exact) << "\n";
  out << "empirical error rate: " << format_double(empirical) << " (" << cfg.trials
      << " trials, seed " << cfg.seed << ")\n";
  return kOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::region:
        return run_region(config, out, err);
      case Command::pentagon:
        return run_pentagon(config, out, err);
      case Command::equiv_check:
        return run_equiv_check(config, out, err);
      case Command::oracle_check:
        return run_oracle_check(config, out, err);
      case Command::best_code:
        return run_best_code(config, out, err);
      case Command::simulate:
        return run_simulate(config, out, err);
    }
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kCapRejection;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  err << "error: unknown command\n";
  return kValidationFailure;
}

}  // namespace macsi::cli
