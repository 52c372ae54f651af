#include <cstdio>
#include <cstring>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "macsi/errors.hpp"
#include "macsi/io.hpp"
#include "macsi/region.hpp"
#include "support/fixtures.hpp"

using namespace macsi;
using namespace macsi::testing;

namespace {

bool models_bit_identical(const MacModel& a, const MacModel& b) {
  if (a.state_prior.size() != b.state_prior.size()) return false;
  if (std::memcmp(a.state_prior.data(), b.state_prior.data(),
                  a.state_prior.size() * sizeof(double)) != 0)
    return false;
  if (a.quantizer_a != b.quantizer_a || a.quantizer_b != b.quantizer_b) return false;
  if (a.obs_size_a != b.obs_size_a || a.obs_size_b != b.obs_size_b) return false;
  if (a.input_size_a != b.input_size_a || a.input_size_b != b.input_size_b) return false;
  if (a.output_size != b.output_size) return false;
  if (!a.kernel.same_shape(b.kernel)) return false;
  if (std::memcmp(a.kernel.data(), b.kernel.data(), a.kernel.size() * sizeof(double)) !=
      0)
    return false;
  return a.state_labels == b.state_labels && a.input_labels_a == b.input_labels_a &&
         a.input_labels_b == b.input_labels_b && a.output_labels == b.output_labels;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("the bundled fixture files parse to the reference models") {
  const LoadedModel adder = load_channel_spec(fixture_path("adder.json"));
  CHECK(adder.warnings.empty());
  CHECK(adder.model.state_size() == 1);
  CHECK(adder.model.output_size == 3);
  CHECK(adder.model.obs_size_a == 1);
  const MacModel adder_ref = adder_model();
  CHECK(std::memcmp(adder.model.kernel.data(), adder_ref.kernel.data(),
                    adder_ref.kernel.size() * sizeof(double)) == 0);

  const LoadedModel xs = load_channel_spec(fixture_path("xorstate.json"));
  CHECK(xs.model.obs_size_a == 2);
  CHECK(xs.model.obs_size_b == 1);
  CHECK(xs.model.state_labels == std::vector<std::string>{"clean", "noise"});
  const MacModel xs_ref = xorstate_model();
  CHECK(std::memcmp(xs.model.kernel.data(), xs_ref.kernel.data(),
                    xs_ref.kernel.size() * sizeof(double)) == 0);
}

TEST_CASE("kernel defects are reported with their indices") {
  std::string text = read_text_file(fixture_path("adder.json"));
  // Scale one kernel row: the (s=0, xa=0, xb=0) row becomes 0.9.
  const std::string needle = "[[1.0, 0.0, 0.0]";
  const auto pos = text.find("[1.0, 0.0, 0.0]");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::strlen("[1.0, 0.0, 0.0]"), "[0.9, 0.0, 0.0]");
  (void)needle;
  try {
    parse_channel_spec(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("s=0") != std::string::npos);
    CHECK(what.find("xa=0") != std::string::npos);
    CHECK(what.find("xb=0") != std::string::npos);
    CHECK(what.find("0.9") != std::string::npos);
  }
}

TEST_CASE("malformed documents carry line context") {
  const std::string text = "{\n  \"states\": 1,\n  \"prior\": [1.0,,]\n}";
  try {
    parse_channel_spec(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("unknown and missing fields are rejected") {
  CHECK_THROWS_AS(parse_channel_spec("{\"bogus\": 1}"), ValidationError);
  const std::string no_kernel = R"({"states":1,"prior":[1.0],"inputs_a":2,
    "inputs_b":2,"outputs":2,"quantizer_a":[0],"quantizer_b":[0]})";
  CHECK_THROWS_AS(parse_channel_spec(no_kernel), ValidationError);
}

TEST_CASE("sparse quantizer labels re-index densely with a warning") {
  const std::string text = R"({
    "states": 2, "prior": [0.5, 0.5],
    "inputs_a": 2, "inputs_b": 2, "outputs": 2,
    "quantizer_a": [0, 2], "quantizer_b": [0, 0],
    "kernel": [
      [[[1.0,0.0],[0.0,1.0]],[[0.0,1.0],[1.0,0.0]]],
      [[[0.5,0.5],[0.5,0.5]],[[0.5,0.5],[0.5,0.5]]]
    ]
  })";
  const LoadedModel loaded = parse_channel_spec(text);
  REQUIRE(loaded.warnings.size() == 1);
  CHECK(loaded.warnings[0].find("quantizer_a") != std::string::npos);
  CHECK(loaded.warnings[0].find("1") != std::string::npos);
  CHECK(loaded.model.quantizer_a == std::vector<int>{0, 1});
  CHECK(loaded.model.obs_size_a == 2);
}

TEST_CASE("export and reparse yield a bit-identical model") {
  for (const char* name : {"adder.json", "xorstate.json"}) {
    const LoadedModel first = load_channel_spec(fixture_path(name));
    const std::string exported = export_channel_spec(first.model);
    const LoadedModel second = parse_channel_spec(exported);
    CHECK(second.warnings.empty());
    CHECK(models_bit_identical(first.model, second.model));
  }
}

TEST_CASE("policy files parse and validate against the model") {
  const MacModel m = xorstate_model();
  const TeamPolicy p = load_team_policy(fixture_path("xorstate_uniform_policy.json"), m);
  CHECK(p.pi_a.size() == 2);
  CHECK(p.pi_b.size() == 1);
  CHECK(p.pi_a[0][0] == 0.5);

  // Round-trip through the exporter.
  const TeamPolicy again = parse_team_policy(export_team_policy(p), m);
  CHECK(again.pi_a == p.pi_a);
  CHECK(again.pi_b == p.pi_b);

  // Wrong shape for this model.
  CHECK_THROWS_AS(parse_team_policy(R"({"pi_a": [[0.5,0.5]], "pi_b": [[1.0,0.0]]})", m),
                  ValidationError);
  CHECK_THROWS_AS(parse_team_policy("{\"pi_a\": []}", m), ValidationError);
}

TEST_CASE("polygon files have the documented layout") {
  const Pentagon p(1.0, 1.0, 1.5);
  const Polygon poly = hull_union(std::span<const Pentagon>(&p, 1));
  const std::string text = format_polygon(poly, 42);
  CHECK(text ==
        "# macsi 0.1.0 seed=42\n0 0\n1 0\n1 0.5\n0.5 1\n0 1\n");
}

TEST_CASE("format_double emits shortest round-trip decimals") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  const double third = 1.0 / 3.0;
  CHECK(std::strtod(format_double(third).c_str(), nullptr) == third);
}

TEST_CASE("the region subcommand is byte-deterministic per seed") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::region;
  cfg.spec_path = fixture_path("adder.json");
  cfg.search.grid_resolution = 4;
  cfg.search.restarts = 2;
  cfg.seed = 77;

  const std::string path_a = temp_path("macsi_region_a.txt");
  const std::string path_b = temp_path("macsi_region_b.txt");
  std::ostringstream out_a, out_b, err;
  cfg.out_path = path_a;
  REQUIRE(cli::run(cfg, out_a, err) == cli::kOk);
  cfg.out_path = path_b;
  REQUIRE(cli::run(cfg, out_b, err) == cli::kOk);

  const std::string bytes_a = read_text_file(path_a);
  const std::string bytes_b = read_text_file(path_b);
  CHECK(bytes_a == bytes_b);
  CHECK(bytes_a.find("# macsi") == 0);

  // Diagnostics match too, apart from the line naming the output file.
  auto strip_path_line = [](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream kept;
    std::string line;
    while (std::getline(in, line))
      if (line.find("->") == std::string::npos) kept << line << "\n";
    return kept.str();
  };
  CHECK(strip_path_line(out_a.str()) == strip_path_line(out_b.str()));
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("the exported adder polygon contains the sum-face corner") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::region;
  cfg.spec_path = fixture_path("adder.json");
  cfg.out_path = temp_path("macsi_region_corner.txt");
  std::ostringstream out, err;
  REQUIRE(cli::run(cfg, out, err) == cli::kOk);

  std::ifstream in(cfg.out_path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("# macsi") == 0);
  bool found = false;
  double ra, rb;
  while (in >> ra >> rb)
    found = found || std::hypot(ra - 1.0, rb - 0.5) < 1e-2;
  CHECK(found);
  std::remove(cfg.out_path.c_str());
}

TEST_CASE("the pentagon subcommand prints the three bounds") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::pentagon;
  cfg.spec_path = fixture_path("xorstate.json");
  cfg.policy_path = fixture_path("xorstate_uniform_policy.json");
  std::ostringstream out, err;
  REQUIRE(cli::run(cfg, out, err) == cli::kOk);
  CHECK(out.str() == "0.5 0.5 0.5\n");
}

TEST_CASE("exit codes distinguish validation failures from cap rejections") {
  // Broken document: validation failure.
  const std::string bad_path = temp_path("macsi_bad_spec.json");
  write_text_file(bad_path, "{\"states\": 1}");
  cli::RunConfig cfg;
  cfg.command = cli::Command::pentagon;
  cfg.spec_path = bad_path;
  cfg.policy_path = fixture_path("xorstate_uniform_policy.json");
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == cli::kValidationFailure);
  CHECK(err.str().find("error:") != std::string::npos);
  std::remove(bad_path.c_str());

  // Oversized exhaustive search: cap rejection.
  cli::RunConfig big;
  big.command = cli::Command::best_code;
  big.spec_path = fixture_path("xorstate.json");
  big.block_n = 2;
  big.messages_a = 4;
  big.messages_b = 1;
  std::ostringstream out2, err2;
  CHECK(cli::run(big, out2, err2) == cli::kCapRejection);

  // Missing required input: validation failure.
  cli::RunConfig missing;
  missing.command = cli::Command::pentagon;
  missing.spec_path = fixture_path("xorstate.json");
  std::ostringstream out3, err3;
  CHECK(cli::run(missing, out3, err3) == cli::kValidationFailure);
}

TEST_CASE("the oracle-check subcommand reports passing sweeps") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::oracle_check;
  cfg.spec_path = fixture_path("xorstate.json");
  cfg.random_encoders = 30;
  std::ostringstream out, err;
  REQUIRE(cli::run(cfg, out, err) == cli::kOk);
  const std::string report = out.str();
  CHECK(report.find("factorization sweep") != std::string::npos);
  CHECK(report.find("violations: 0") != std::string::npos);
  CHECK(report.find("PASS") != std::string::npos);
  CHECK(report.find("FAIL") == std::string::npos);
}

TEST_CASE("the simulate subcommand cross-checks enumeration") {
  cli::RunConfig cfg;
  cfg.command = cli::Command::simulate;
  cfg.spec_path = fixture_path("adder.json");
  cfg.block_n = 1;
  cfg.messages_a = 2;
  cfg.messages_b = 1;
  cfg.trials = 500;
  std::ostringstream out, err;
  REQUIRE(cli::run(cfg, out, err) == cli::kOk);
  CHECK(out.str().find("exact error probability: 0\n") != std::string::npos);
  CHECK(out.str().find("empirical error rate: 0 ") != std::string::npos);
}
