#include <cmath>
#include <cstdint>
#include <doctest.h>
#include <vector>

#include "macsi/errors.hpp"
#include "macsi/model.hpp"
#include "macsi/oracle.hpp"
#include "macsi/rng.hpp"
#include "support/fixtures.hpp"

using namespace macsi;
using namespace macsi::testing;

namespace {

// Single-symbol encoder for the adder channel sending the message directly.
BlockEncoder direct_send_encoder() {
  BlockEncoder enc;
  enc.message_count = 2;
  enc.block_length = 1;
  enc.obs_size = 1;
  enc.input_size = 2;
  enc.maps = {{0, 1}};
  return enc;
}

BlockEncoder constant_encoder(const MacModel& m, Side side, int n, int w_count) {
  Rng rng(0);
  BlockEncoder enc = random_encoder(m, side, n, w_count, rng);
  for (auto& map : enc.maps)
    for (auto& cell : map) cell = 0;
  return enc;
}

}  // namespace

TEST_CASE("state_weights on tiny blocks") {
  const std::vector<double> trivial{1.0};
  const HistoryWeights one = state_weights(1, trivial);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].first.empty());
  CHECK(one.entries[0].second == 1.0);

  const std::vector<double> fair{0.5, 0.5};
  const HistoryWeights two = state_weights(2, fair);
  REQUIRE(two.entries.size() == 3);
  CHECK(two.entries[0].first.empty());
  CHECK(two.entries[0].second == 0.5);
  CHECK(two.entries[1].first == std::vector<int>{0});
  CHECK(two.entries[1].second == 0.25);
  CHECK(two.entries[2].first == std::vector<int>{1});
  CHECK(two.entries[2].second == 0.25);
}

TEST_CASE("history weights carry unit total mass") {
  Rng rng(12);
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> prior(3);
    double sum = 0.0;
    for (double& p : prior) {
      p = rng.exponential() + 1e-3;
      sum += p;
    }
    for (double& p : prior) p /= sum;
    const HistoryWeights hw = state_weights(n, prior);
    CHECK(hw.total() == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& [sigma, alpha] : hw.entries) CHECK(alpha >= 0.0);
  }
}

TEST_CASE("history weights are exact for the dyadic fair prior") {
  const std::vector<double> fair{0.5, 0.5};
  for (int n = 1; n <= 6; ++n) {
    const HistoryWeights hw = state_weights(n, fair);

    // Rational identity, integers only: with the common denominator n*2^(n-1),
    // each history of length L has numerator 2^(n-1-L), and the numerators must
    // add up to exactly n*2^(n-1).
    std::uint64_t numerator_sum = 0;
    for (const auto& [sigma, alpha] : hw.entries) {
      const int len = static_cast<int>(sigma.size());
      numerator_sum += std::uint64_t{1} << (n - 1 - len);
      // The computed double must match the exact dyadic value divided by n,
      // which rounds once; bitwise equality is required.
      CHECK(alpha == std::ldexp(1.0, -len) / n);
    }
    CHECK(numerator_sum == static_cast<std::uint64_t>(n) * (std::uint64_t{1} << (n - 1)));
  }
}

TEST_CASE("induced policies count message preimages") {
  const MacModel m = xorstate_model();

  // Single message: point mass on the encoder output for every observation.
  Rng rng(5);
  const BlockEncoder single = random_encoder(m, Side::A, 2, 1, rng);
  const Conditional pi = induced_policy(m, single, Side::A, 1, {});
  for (const auto& row : pi) {
    int ones = 0;
    for (double v : row) ones += v == 1.0;
    CHECK(ones == 1);
  }

  // Message-ignoring encoder: still a point mass with four messages.
  BlockEncoder ignore = constant_encoder(m, Side::A, 1, 4);
  const Conditional pi_ignore = induced_policy(m, ignore, Side::A, 1, {});
  for (const auto& row : pi_ignore) CHECK(row[0] == 1.0);

  // Two of four messages map to each input: a (0.5, 0.5) conditional.
  BlockEncoder split = constant_encoder(m, Side::A, 1, 4);
  // Cell layout at t=1: w * |V| + v.
  split.maps[0] = {0, 0, 0, 1, 1, 0, 1, 1};  // w in {0,1} -> 0, w in {2,3} -> 1 at v=0
  const Conditional pi_split = induced_policy(m, split, Side::A, 1, {});
  CHECK(pi_split[0][0] == 0.5);
  CHECK(pi_split[0][1] == 0.5);

  CHECK_THROWS_AS(induced_policy(m, split, Side::A, 2, {}), ValidationError);
  CHECK_THROWS_AS(induced_policy(m, split, Side::A, 0, {}), ValidationError);
}

TEST_CASE("empirical joints marginalize to the prior at t=1") {
  const MacModel m = xorstate_model();
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const BlockEncoder ea = random_encoder(m, Side::A, 2, 2, rng);
    const BlockEncoder eb = random_encoder(m, Side::B, 2, 2, rng);
    const JointDistribution nu = empirical_joint_at(m, ea, eb, 1, {});
    CHECK(nu.t.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const Tensor s_marg = marginal(nu, {Var::S});
    for (int s = 0; s < m.state_size(); ++s)
      CHECK(s_marg[s] == doctest::Approx(m.state_prior[s]).epsilon(1e-12));
  }
}

TEST_CASE("single-message codes factorize without any deviation") {
  const MacModel m = xorstate_model();
  Rng rng(8);
  const BlockEncoder ea = random_encoder(m, Side::A, 2, 1, rng);
  const BlockEncoder eb = random_encoder(m, Side::B, 2, 1, rng);
  CHECK(check_factorization(m, ea, eb) == 0.0);

  // The empirical joint equals the deterministic-policy joint outright.
  const std::vector<int> sigma{1};
  const JointDistribution nu = empirical_joint_at(m, ea, eb, 2, sigma);
  const TeamPolicy induced{induced_policy(m, ea, Side::A, 2, sigma),
                           induced_policy(m, eb, Side::B, 2, sigma)};
  const JointDistribution direct = build_joint(m, induced);
  for (std::size_t i = 0; i < nu.t.size(); ++i) CHECK(nu.t[i] == direct.t[i]);
}

TEST_CASE("a seeded two-message code factorizes at the clean-state history") {
  const MacModel m = xorstate_model();
  Rng rng(1234);
  const BlockEncoder ea = random_encoder(m, Side::A, 2, 2, rng);
  const BlockEncoder eb = random_encoder(m, Side::B, 2, 2, rng);

  const std::vector<int> sigma{0};  // past state = clean
  const JointDistribution emp = empirical_joint_at(m, ea, eb, 2, sigma);
  const TeamPolicy induced{induced_policy(m, ea, Side::A, 2, sigma),
                           induced_policy(m, eb, Side::B, 2, sigma)};
  const JointDistribution fac = build_joint(m, induced);
  for (std::size_t i = 0; i < emp.t.size(); ++i)
    CHECK(std::abs(emp.t[i] - fac.t[i]) <= 1e-12);
}

TEST_CASE("random codes satisfy the per-history factorization") {
  Rng rng(9001);
  for (const MacModel& m : {adder_model(), xorstate_model()}) {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      for (int w : {1, 2, 4}) {
        for (int trial = 0; trial < 6; ++trial) {
          const BlockEncoder ea = random_encoder(m, Side::A, n, w, rng);
          const BlockEncoder eb = random_encoder(m, Side::B, n, 5 - w, rng);
          worst = std::max(worst, check_factorization(m, ea, eb));
        }
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("swapping the quantizers is detected as a corruption") {
  const MacModel m = xorstate_model();
  // Encoder a echoes its observation, so its induced policy genuinely depends
  // on the observation; keying it at the wrong quantizer must show up.
  BlockEncoder echo = constant_encoder(m, Side::A, 1, 1);
  echo.maps[0] = {0, 1};  // x = v
  const BlockEncoder blind = constant_encoder(m, Side::B, 1, 1);

  CHECK(check_factorization(m, echo, blind) == 0.0);
  CHECK(check_factorization(m, echo, blind, FactorizationMode::swapped_quantizers) >
        1e-2);
}

TEST_CASE("fano bounds on trivial and direct-send codes") {
  const MacModel m = adder_model();

  // No communication at all: zero error, nonnegative bounds.
  BlockCode idle;
  idle.enc_a = constant_encoder(m, Side::A, 1, 1);
  idle.enc_b = constant_encoder(m, Side::B, 1, 1);
  idle.dec = map_decoder(m, idle.enc_a, idle.enc_b);
  const FanoBounds fb_idle = fano_bounds(m, idle);
  CHECK(fb_idle.error_probability == 0.0);
  CHECK(fb_idle.bound_a >= 0.0);
  CHECK(fb_idle.bound_b >= 0.0);
  CHECK(fb_idle.bound_sum >= 0.0);

  // Encoder a sends its message over a clean channel while b stays silent.
  BlockCode direct;
  direct.enc_a = direct_send_encoder();
  direct.enc_b = constant_encoder(m, Side::B, 1, 1);
  direct.dec = map_decoder(m, direct.enc_a, direct.enc_b);
  const FanoBounds fb = fano_bounds(m, direct);
  CHECK(fb.error_probability == 0.0);
  CHECK(fb.bound_sum >= 1.0 - 1e-12);
  CHECK(fb.bound_a >= 1.0 - 1e-12);
}

TEST_CASE("every adder code in the exhaustive sweep respects the rate bounds") {
  const MacModel m = adder_model();
  const double rate = 1.0;  // log2(2) / 1 for each encoder
  int checked = 0;
  int below_half = 0;
  for_each_encoder_pair(m, 1, 2, 2, kEncoderPairCap,
                        [&](const BlockEncoder& ea, const BlockEncoder& eb) {
                          BlockCode code{ea, eb, map_decoder(m, ea, eb)};
                          const FanoBounds fb = fano_bounds(m, code);
                          ++checked;
                          if (fb.error_probability >= 0.5) return;
                          ++below_half;
                          CHECK(rate <= fb.bound_a + 1e-9);
                          CHECK(rate <= fb.bound_b + 1e-9);
                          CHECK(2 * rate <= fb.bound_sum + 1e-9);
                        });
  CHECK(checked == 16);
  CHECK(below_half > 0);
}

TEST_CASE("two-use sweeps respect the rate bounds on both fixtures") {
  struct Sweep {
    MacModel model;
    int wa, wb;
  };
  for (Sweep sweep : {Sweep{adder_model(), 2, 2}, Sweep{xorstate_model(), 2, 1}}) {
    const double ra = std::log2(static_cast<double>(sweep.wa)) / 2.0;
    const double rb = std::log2(static_cast<double>(sweep.wb)) / 2.0;
    int violations = 0, below_half = 0;
    for_each_encoder_pair(sweep.model, 2, sweep.wa, sweep.wb, kEncoderPairCap,
                          [&](const BlockEncoder& ea, const BlockEncoder& eb) {
                            BlockCode code{ea, eb,
                                           map_decoder(sweep.model, ea, eb)};
                            const FanoBounds fb = fano_bounds(sweep.model, code);
                            if (fb.error_probability >= 0.5) return;
                            ++below_half;
                            if (ra > fb.bound_a + 1e-9 || rb > fb.bound_b + 1e-9 ||
                                ra + rb > fb.bound_sum + 1e-9)
                              ++violations;
                          });
    CHECK(below_half > 0);
    CHECK(violations == 0);
  }
}

TEST_CASE("a decoder that is always wrong gives divergent bounds") {
  const MacModel m = adder_model();
  BlockCode code;
  code.enc_a = direct_send_encoder();
  code.enc_b = direct_send_encoder();
  code.dec = map_decoder(m, code.enc_a, code.enc_b);
  // Overwrite the decoder so that no output is ever the transmitted pair:
  // y = 0 can only come from (0,0), y = 2 only from (1,1), y = 1 from the two
  // mixed pairs.
  code.dec.table[0] = {1, 1};  // y = 0
  code.dec.table[1] = {0, 0};  // y = 1
  code.dec.table[2] = {0, 0};  // y = 2
  const FanoBounds fb = fano_bounds(m, code);
  CHECK(fb.error_probability == 1.0);
  CHECK(std::isinf(fb.bound_a));
  CHECK(std::isinf(fb.bound_b));
  CHECK(std::isinf(fb.bound_sum));
}

TEST_CASE("exhaustive search finds zero-error codes when they exist") {
  const MacModel m = adder_model();
  const BestCodeResult one_bit = brute_force_best_code(m, 1, 2, 1);
  CHECK(one_bit.error_probability == 0.0);
  CHECK(exact_error_probability(m, one_bit.code) == 0.0);

  // Rate pair (1,1) exceeds the sum bound 1.5, so zero error is impossible.
  const BestCodeResult full = brute_force_best_code(m, 1, 2, 2);
  CHECK(full.error_probability > 0.01);
  CHECK(exact_error_probability(m, full.code) ==
        doctest::Approx(full.error_probability).epsilon(1e-12));
}

TEST_CASE("best codes exploit causal state knowledge across a block") {
  // One bit from encoder a over two uses of the xorstate channel. Encoder a
  // sees each state as it arrives, so the best strategy routes the bit through
  // the first clean slot and the receiver (which knows the states) reads it
  // there. Only the all-noise block, probability 1/4, forces a guess:
  // eps* = 1/4 * 1/2 = 0.125.
  const MacModel m = xorstate_model();
  const BestCodeResult best = brute_force_best_code(m, 2, 2, 1);
  CHECK(best.error_probability == doctest::Approx(0.125).epsilon(1e-12));

  // A single use cannot do better than a coin flip on the noise state.
  const BestCodeResult single = brute_force_best_code(m, 1, 2, 1);
  CHECK(single.error_probability == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("guessing is optimal through an input-ignoring kernel") {
  const MacModel m = input_ignoring_model();
  const BestCodeResult r21 = brute_force_best_code(m, 1, 2, 1);
  CHECK(r21.error_probability == doctest::Approx(0.5).epsilon(1e-12));
  const BestCodeResult r22 = brute_force_best_code(m, 1, 2, 2);
  CHECK(r22.error_probability == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("the pair cap rejects oversized sweeps with the count") {
  const MacModel m = xorstate_model();
  try {
    brute_force_best_code(m, 2, 4, 1);
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& e) {
    CHECK(e.count() > kEncoderPairCap);
  }
}

TEST_CASE("simulation agrees with the exact enumeration") {
  const MacModel adder = adder_model();

  // Zero-error code: the empirical rate is exactly zero on any sample.
  const BestCodeResult clean = brute_force_best_code(adder, 1, 2, 1);
  CHECK(simulate_block(adder, clean.code, 5000, 7) == 0.0);

  // Guessing through an input-ignoring kernel: 3-sigma binomial window.
  const MacModel blind = input_ignoring_model();
  const BestCodeResult guess = brute_force_best_code(blind, 1, 2, 1);
  const double guess_rate = simulate_block(blind, guess.code, 10000, 11);
  CHECK(std::abs(guess_rate - 0.5) <= 3.0 * std::sqrt(0.25 / 10000.0));

  // A lossy code: empirical error within 3 sigma of the exact value.
  const BestCodeResult lossy = brute_force_best_code(adder, 1, 2, 2);
  const double eps = lossy.error_probability;
  const double emp = simulate_block(adder, lossy.code, 10000, 13);
  CHECK(std::abs(emp - eps) <= 3.0 * std::sqrt(eps * (1 - eps) / 10000.0));

  // Deterministic per seed.
  CHECK(simulate_block(adder, lossy.code, 2000, 99) ==
        simulate_block(adder, lossy.code, 2000, 99));

  // Seed-averaged convergence: mean within 4/sqrt(trials).
  const int trials = 10000;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    mean += simulate_block(adder, lossy.code, trials, seed);
  mean /= 10.0;
  CHECK(std::abs(mean - eps) < 4.0 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("simulate rejects nonpositive trial counts") {
  const MacModel m = adder_model();
  const BestCodeResult best = brute_force_best_code(m, 1, 2, 1);
  CHECK_THROWS_AS(simulate_block(m, best.code, 0, 1), ValidationError);
}
