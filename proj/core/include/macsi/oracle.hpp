#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "macsi/model.hpp"
#include "macsi/rng.hpp"

namespace macsi {

// Exhaustive encoder-pair searches stop here.
inline constexpr std::uint64_t kEncoderPairCap = 10'000'000;
// Per-enumeration atom budget for exact probability computations.
inline constexpr std::uint64_t kJointAtomCap = 1'000'000;

// Arbitrary causal block encoder for one transmitter: for each time t a total
// map (w, v_1..v_t) -> x. Rows are stored per t with the message index major
// and the observation history packed in mixed radix, first symbol most
// significant.
struct BlockEncoder {
  int message_count = 1;
  int block_length = 1;
  int obs_size = 1;
  int input_size = 1;
  std::vector<std::vector<std::uint8_t>> maps;  // maps[t-1][w * obs^t + hist]

  // x = phi_t(w, v_1..v_t); history.size() == t, 1 <= t <= block_length.
  int input_at(int t, int w, std::span<const int> history) const;

  // Number of table cells (sum over t of |W| * |V|^t).
  std::uint64_t cell_count() const;
};

// Decoder table over (s_1..s_n, y_1..y_n), packed mixed radix with the state
// sequence major and earlier symbols more significant.
struct BlockDecoder {
  int block_length = 1;
  int state_size = 1;
  int output_size = 1;
  std::vector<std::pair<int, int>> table;  // (w_a, w_b) per (s-seq, y-seq)

  std::size_t pack(std::span<const int> states, std::span<const int> outputs) const;
  std::pair<int, int> decode(std::span<const int> states,
                             std::span<const int> outputs) const;
};

struct BlockCode {
  BlockEncoder enc_a;
  BlockEncoder enc_b;
  BlockDecoder dec;
};

// Weights alpha_sigma = P(S_1..S_{t-1} = sigma)/n over all state histories of
// length 0..n-1; their total mass is exactly 1.
struct HistoryWeights {
  int block_length = 1;
  // Ordered by history length, then lexicographically.
  std::vector<std::pair<std::vector<int>, double>> entries;

  double total() const;
};

HistoryWeights state_weights(int n, std::span<const double> prior);

// The per-history policy induced by a block encoder at time t: the fraction of
// messages mapping each observation to each input, given the quantized history
// of sigma (length t-1).
Conditional induced_policy(const MacModel& model, const BlockEncoder& enc, Side side,
                           int t, std::span<const int> sigma);

// nu_sigma(s,x,y) = P(S_t=s, X_t=x, Y_t=y | S_1..S_{t-1}=sigma), by exact
// enumeration over message pairs with uniform weights. No sampling.
JointDistribution empirical_joint_at(const MacModel& model, const BlockEncoder& enc_a,
                                     const BlockEncoder& enc_b, int t,
                                     std::span<const int> sigma);

// Negative-control mode: evaluates the factorized side with the two quantizers
// swapped (indices clamped into the other policy's domain), which must produce
// a large deviation whenever q_a != q_b and the encoders use their observations.
enum class FactorizationMode { standard, swapped_quantizers };

// Max over every t, every positive-probability history sigma, and every
// (s,x,y) atom of |empirical joint - P(s) pi_a pi_b P(y|s,x)| with the
// policies induced by the encoders at (t, sigma).
double check_factorization(const MacModel& model, const BlockEncoder& enc_a,
                           const BlockEncoder& enc_b,
                           FactorizationMode mode = FactorizationMode::standard);

// Exact block error probability P(psi(S,Y) != W) of the code's own decoder.
double exact_error_probability(const MacModel& model, const BlockCode& code);

// Maximum-a-posteriori decoder given (s-seq, y-seq); ties break toward the
// smallest (w_a, w_b) pair index. MAP is optimal because the receiver sees the
// full state sequence.
BlockDecoder map_decoder(const MacModel& model, const BlockEncoder& enc_a,
                         const BlockEncoder& enc_b);

struct FanoBounds {
  double error_probability = 0.0;  // exact eps of the code
  double bound_a = 0.0;            // sum_sigma alpha_sigma I(Xa;Y|Xb,S)|sigma + eta
  double bound_b = 0.0;
  double bound_sum = 0.0;
};

// The three converse right-hand sides for this code; bounds are +inf when the
// slack term diverges (eps -> 1).
FanoBounds fano_bounds(const MacModel& model, const BlockCode& code);

struct BestCodeResult {
  BlockCode code;
  double error_probability = 0.0;  // minimal exact eps over all encoder pairs
  std::uint64_t pairs_searched = 0;
};

// Exhausts every encoder map pair (MAP-decoded), returning the first code in
// enumeration order achieving the minimal error probability. Stops early when
// a zero-error code appears (no better code can follow).
BestCodeResult brute_force_best_code(const MacModel& model, int n, int wa_count,
                                     int wb_count,
                                     std::uint64_t pair_cap = kEncoderPairCap);

// Monte Carlo cross-check of the exact enumeration; deterministic per seed.
double simulate_block(const MacModel& model, const BlockCode& code, int trials,
                      std::uint64_t seed);

// Visits every encoder table pair in the deterministic enumeration order used
// by brute_force_best_code. Cap-checked the same way.
void for_each_encoder_pair(const MacModel& model, int n, int wa_count, int wb_count,
                           std::uint64_t pair_cap,
                           const std::function<void(const BlockEncoder&,
                                                    const BlockEncoder&)>& fn);

// Uniformly random encoder tables, for property sweeps.
BlockEncoder random_encoder(const MacModel& model, Side side, int n, int message_count,
                            Rng& rng);

}  // namespace macsi
