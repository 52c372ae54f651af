#include "macsi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "macsi/errors.hpp"
#include "macsi/information.hpp"

namespace macsi {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a == kSaturated || b == kSaturated) return kSaturated;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

// Visits all state histories of the given length in lexicographic order.
template <typename F>
void for_each_history(int length, int state_size, F&& f) {
  std::vector<int> sigma(static_cast<std::size_t>(length), 0);
  while (true) {
    f(const_cast<const std::vector<int>&>(sigma));
    int i = length - 1;
    while (i >= 0 && sigma[static_cast<std::size_t>(i)] == state_size - 1) {
      sigma[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++sigma[static_cast<std::size_t>(i)];
  }
}

double history_probability(std::span<const double> prior, std::span<const int> sigma) {
  double p = 1.0;
  for (int s : sigma) p *= prior[static_cast<std::size_t>(s)];
  return p;
}

void check_time_index(const BlockEncoder& enc, int t) {
  if (t < 1 || t > enc.block_length)
    throw ValidationError("block encoder: time index " + std::to_string(t) +
                          " outside [1, " + std::to_string(enc.block_length) + "]");
}

void check_sigma(const MacModel& model, std::span<const int> sigma, int t) {
  if (static_cast<int>(sigma.size()) != t - 1)
    throw ValidationError("state history length " + std::to_string(sigma.size()) +
                          " does not match t-1 = " + std::to_string(t - 1));
  for (int s : sigma)
    if (s < 0 || s >= model.state_size())
      throw ValidationError("state history entry outside the state alphabet");
}

// Per-time input tables x[t-1][w] for a fixed full state sequence.
std::vector<std::vector<int>> inputs_for_states(const MacModel& model,
                                                const BlockEncoder& enc, Side side,
                                                std::span<const int> states) {
  const std::vector<int>& q = model.quantizer(side);
  const int n = enc.block_length;
  std::vector<int> obs(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    obs[static_cast<std::size_t>(t)] = q[static_cast<std::size_t>(states[static_cast<std::size_t>(t)])];
  std::vector<std::vector<int>> x(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(enc.message_count)));
  for (int t = 1; t <= n; ++t)
    for (int w = 0; w < enc.message_count; ++w)
      x[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(w)] =
          enc.input_at(t, w, std::span<const int>(obs.data(), static_cast<std::size_t>(t)));
  return x;
}

void check_code_shapes(const MacModel& model, const BlockEncoder& a,
                       const BlockEncoder& b) {
  if (a.block_length != b.block_length)
    throw ValidationError("block encoders disagree on the block length");
  if (a.obs_size != model.obs_size_a || b.obs_size != model.obs_size_b ||
      a.input_size != model.input_size_a || b.input_size != model.input_size_b)
    throw ValidationError("block encoder alphabets do not match the model");
}

}  // namespace

int BlockEncoder::input_at(int t, int w, std::span<const int> history) const {
  std::size_t h = 0;
  for (int v : history) h = h * static_cast<std::size_t>(obs_size) + static_cast<std::size_t>(v);
  const std::size_t obs_pow = static_cast<std::size_t>(pow_u64(
      static_cast<std::uint64_t>(obs_size), t));
  return maps[static_cast<std::size_t>(t - 1)]
             [static_cast<std::size_t>(w) * obs_pow + h];
}

std::uint64_t BlockEncoder::cell_count() const {
  std::uint64_t cells = 0;
  for (int t = 1; t <= block_length; ++t)
    cells += sat_mul(static_cast<std::uint64_t>(message_count),
                     pow_u64(static_cast<std::uint64_t>(obs_size), t));
  return cells;
}

std::size_t BlockDecoder::pack(std::span<const int> states,
                               std::span<const int> outputs) const {
  std::size_t si = 0;
  for (int s : states) si = si * static_cast<std::size_t>(state_size) + static_cast<std::size_t>(s);
  std::size_t yi = 0;
  for (int y : outputs) yi = yi * static_cast<std::size_t>(output_size) + static_cast<std::size_t>(y);
  return si * static_cast<std::size_t>(pow_u64(static_cast<std::uint64_t>(output_size),
                                               block_length)) +
         yi;
}

std::pair<int, int> BlockDecoder::decode(std::span<const int> states,
                                         std::span<const int> outputs) const {
  return table[pack(states, outputs)];
}

double HistoryWeights::total() const {
  double t = 0.0;
  for (const auto& [sigma, w] : entries) t += w;
  return t;
}

HistoryWeights state_weights(int n, std::span<const double> prior) {
  if (n < 1) throw ValidationError("state_weights: block length must be >= 1");
  double sum = 0.0;
  for (double p : prior) {
    if (p < 0.0) throw ValidationError("state_weights: negative prior entry");
    sum += p;
  }
  if (prior.empty() || std::abs(sum - 1.0) > kInputTol)
    throw ValidationError("state_weights: prior does not sum to 1");

  HistoryWeights hw;
  hw.block_length = n;
  const int s_size = static_cast<int>(prior.size());
  for (int len = 0; len < n; ++len) {
    for_each_history(len, s_size, [&](const std::vector<int>& sigma) {
      hw.entries.emplace_back(sigma, history_probability(prior, sigma) / n);
    });
  }
  return hw;
}

Conditional induced_policy(const MacModel& model, const BlockEncoder& enc, Side side,
                           int t, std::span<const int> sigma) {
  check_time_index(enc, t);
  check_sigma(model, sigma, t);

  const std::vector<int>& q = model.quantizer(side);
  std::vector<int> obs(static_cast<std::size_t>(t));
  for (int i = 0; i < t - 1; ++i)
    obs[static_cast<std::size_t>(i)] =
        q[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];

  const int obs_size = model.obs_size(side);
  const int inputs = model.input_size(side);
  Conditional pi(static_cast<std::size_t>(obs_size),
                 std::vector<double>(static_cast<std::size_t>(inputs), 0.0));
  const double w_mass = 1.0 / enc.message_count;
  for (int v = 0; v < obs_size; ++v) {
    obs[static_cast<std::size_t>(t - 1)] = v;
    for (int w = 0; w < enc.message_count; ++w) {
      const int x = enc.input_at(t, w, obs);
      pi[static_cast<std::size_t>(v)][static_cast<std::size_t>(x)] += w_mass;
    }
  }
  return pi;
}

JointDistribution empirical_joint_at(const MacModel& model, const BlockEncoder& enc_a,
                                     const BlockEncoder& enc_b, int t,
                                     std::span<const int> sigma) {
  ensure_valid_model(model);
  check_code_shapes(model, enc_a, enc_b);
  check_time_index(enc_a, t);
  check_sigma(model, sigma, t);

  const std::uint64_t atoms =
      sat_mul(sat_mul(static_cast<std::uint64_t>(enc_a.message_count),
                      static_cast<std::uint64_t>(enc_b.message_count)),
              sat_mul(static_cast<std::uint64_t>(model.state_size()),
                      static_cast<std::uint64_t>(model.output_size)));
  if (atoms > kJointAtomCap)
    throw CapExceededError("empirical joint enumeration of " + std::to_string(atoms) +
                               " atoms exceeds cap " + std::to_string(kJointAtomCap),
                           atoms);

  JointDistribution joint;
  joint.t = Tensor({model.state_size(), model.input_size_a, model.input_size_b,
                    model.output_size});

  std::vector<int> obs_a(static_cast<std::size_t>(t));
  std::vector<int> obs_b(static_cast<std::size_t>(t));
  for (int i = 0; i < t - 1; ++i) {
    obs_a[static_cast<std::size_t>(i)] = model.quantizer_a[static_cast<std::size_t>(
        sigma[static_cast<std::size_t>(i)])];
    obs_b[static_cast<std::size_t>(i)] = model.quantizer_b[static_cast<std::size_t>(
        sigma[static_cast<std::size_t>(i)])];
  }

  const double w_mass = 1.0 / (static_cast<double>(enc_a.message_count) *
                               static_cast<double>(enc_b.message_count));
  std::vector<int> xa(static_cast<std::size_t>(enc_a.message_count));
  std::vector<int> xb(static_cast<std::size_t>(enc_b.message_count));
  for (int s = 0; s < model.state_size(); ++s) {
    const double ps = model.state_prior[static_cast<std::size_t>(s)];
    obs_a[static_cast<std::size_t>(t - 1)] = model.quantizer_a[static_cast<std::size_t>(s)];
    obs_b[static_cast<std::size_t>(t - 1)] = model.quantizer_b[static_cast<std::size_t>(s)];
    for (int w = 0; w < enc_a.message_count; ++w)
      xa[static_cast<std::size_t>(w)] = enc_a.input_at(t, w, obs_a);
    for (int w = 0; w < enc_b.message_count; ++w)
      xb[static_cast<std::size_t>(w)] = enc_b.input_at(t, w, obs_b);

    // Exact enumeration over message pairs. check_factorization compares this
    // against the factored product, so this path must stay per-pair.
    for (int wa = 0; wa < enc_a.message_count; ++wa) {
      for (int wb = 0; wb < enc_b.message_count; ++wb) {
        const double mass = ps * w_mass;
        for (int y = 0; y < model.output_size; ++y) {
          const int idx[4] = {s, xa[static_cast<std::size_t>(wa)],
                              xb[static_cast<std::size_t>(wb)], y};
          joint.t.at(idx) += mass * model.kernel.at(idx);
        }
      }
    }
  }
  return joint;
}

double check_factorization(const MacModel& model, const BlockEncoder& enc_a,
                           const BlockEncoder& enc_b, FactorizationMode mode) {
  ensure_valid_model(model);
  check_code_shapes(model, enc_a, enc_b);

  const int n = enc_a.block_length;
  double max_dev = 0.0;
  for (int t = 1; t <= n; ++t) {
    for_each_history(t - 1, model.state_size(), [&](const std::vector<int>& sigma) {
      if (history_probability(model.state_prior, sigma) == 0.0) return;  // null event
      const JointDistribution emp = empirical_joint_at(model, enc_a, enc_b, t, sigma);
      const Conditional pi_a = induced_policy(model, enc_a, Side::A, t, sigma);
      const Conditional pi_b = induced_policy(model, enc_b, Side::B, t, sigma);

      if (mode == FactorizationMode::standard) {
        const JointDistribution fac = build_joint(model, TeamPolicy{pi_a, pi_b});
        for (std::size_t i = 0; i < emp.t.size(); ++i)
          max_dev = std::max(max_dev, std::abs(emp.t[i] - fac.t[i]));
      } else {
        // Swapped-quantizer negative control; indices clamp into the other
        // policy's domain when the observation alphabets differ.
        for (int s = 0; s < model.state_size(); ++s) {
          const int va = std::min(model.quantizer_b[static_cast<std::size_t>(s)],
                                  model.obs_size_a - 1);
          const int vb = std::min(model.quantizer_a[static_cast<std::size_t>(s)],
                                  model.obs_size_b - 1);
          const double ps = model.state_prior[static_cast<std::size_t>(s)];
          for (int ia = 0; ia < model.input_size_a; ++ia) {
            for (int ib = 0; ib < model.input_size_b; ++ib) {
              const double pab = ps * pi_a[static_cast<std::size_t>(va)][static_cast<std::size_t>(ia)] *
                                 pi_b[static_cast<std::size_t>(vb)][static_cast<std::size_t>(ib)];
              for (int y = 0; y < model.output_size; ++y) {
                const int idx[4] = {s, ia, ib, y};
                const double fac = pab * model.kernel.at(idx);
                max_dev = std::max(max_dev, std::abs(emp.t.at(idx) - fac));
              }
            }
          }
        }
      }
    });
  }
  return max_dev;
}

double exact_error_probability(const MacModel& model, const BlockCode& code) {
  ensure_valid_model(model);
  check_code_shapes(model, code.enc_a, code.enc_b);
  const int n = code.enc_a.block_length;
  if (code.dec.block_length != n)
    throw ValidationError("decoder block length does not match the encoders");

  const std::uint64_t atoms =
      sat_mul(sat_mul(static_cast<std::uint64_t>(code.enc_a.message_count),
                      static_cast<std::uint64_t>(code.enc_b.message_count)),
              sat_mul(pow_u64(static_cast<std::uint64_t>(model.state_size()), n),
                      pow_u64(static_cast<std::uint64_t>(model.output_size), n)));
  if (atoms > kJointAtomCap)
    throw CapExceededError("exact error enumeration of " + std::to_string(atoms) +
                               " atoms exceeds cap " + std::to_string(kJointAtomCap),
                           atoms);

  const double w_mass = 1.0 / (static_cast<double>(code.enc_a.message_count) *
                               static_cast<double>(code.enc_b.message_count));
  double error = 0.0;
  std::vector<int> y_seq(static_cast<std::size_t>(n));
  for_each_history(n, model.state_size(), [&](const std::vector<int>& s_seq) {
    const double ps = history_probability(model.state_prior, s_seq);
    if (ps == 0.0) return;
    const auto x_a = inputs_for_states(model, code.enc_a, Side::A, s_seq);
    const auto x_b = inputs_for_states(model, code.enc_b, Side::B, s_seq);

    for (int wa = 0; wa < code.enc_a.message_count; ++wa) {
      for (int wb = 0; wb < code.enc_b.message_count; ++wb) {
        // Depth-first over output sequences, pruning zero-probability branches.
        auto walk = [&](auto&& self, int t, double p) -> void {
          if (p == 0.0) return;
          if (t == n) {
            if (code.dec.decode(s_seq, y_seq) != std::make_pair(wa, wb))
              error += w_mass * ps * p;
            return;
          }
          const int s = s_seq[static_cast<std::size_t>(t)];
          const int xa = x_a[static_cast<std::size_t>(t)][static_cast<std::size_t>(wa)];
          const int xb = x_b[static_cast<std::size_t>(t)][static_cast<std::size_t>(wb)];
          for (int y = 0; y < model.output_size; ++y) {
            const int kidx[4] = {s, xa, xb, y};
            y_seq[static_cast<std::size_t>(t)] = y;
            self(self, t + 1, p * model.kernel.at(kidx));
          }
        };
        walk(walk, 0, 1.0);
      }
    }
  });
  return error;
}

BlockDecoder map_decoder(const MacModel& model, const BlockEncoder& enc_a,
                         const BlockEncoder& enc_b) {
  ensure_valid_model(model);
  check_code_shapes(model, enc_a, enc_b);
  const int n = enc_a.block_length;

  BlockDecoder dec;
  dec.block_length = n;
  dec.state_size = model.state_size();
  dec.output_size = model.output_size;
  const std::uint64_t table_size =
      sat_mul(pow_u64(static_cast<std::uint64_t>(model.state_size()), n),
              pow_u64(static_cast<std::uint64_t>(model.output_size), n));
  const std::uint64_t work =
      sat_mul(table_size, sat_mul(static_cast<std::uint64_t>(enc_a.message_count),
                                  static_cast<std::uint64_t>(enc_b.message_count)));
  if (work > kJointAtomCap)
    throw CapExceededError("decoder construction over " + std::to_string(work) +
                               " atoms exceeds cap " + std::to_string(kJointAtomCap),
                           work);
  dec.table.assign(static_cast<std::size_t>(table_size), {0, 0});

  const std::uint64_t y_count = pow_u64(static_cast<std::uint64_t>(model.output_size), n);
  std::vector<double> best(static_cast<std::size_t>(y_count));
  std::vector<int> y_seq(static_cast<std::size_t>(n));
  std::size_t s_block = 0;
  for_each_history(n, model.state_size(), [&](const std::vector<int>& s_seq) {
    std::fill(best.begin(), best.end(), -1.0);
    const auto x_a = inputs_for_states(model, enc_a, Side::A, s_seq);
    const auto x_b = inputs_for_states(model, enc_b, Side::B, s_seq);
    for (int wa = 0; wa < enc_a.message_count; ++wa) {
      for (int wb = 0; wb < enc_b.message_count; ++wb) {
        std::size_t yi = 0;
        auto walk = [&](auto&& self, int t, double p) -> void {
          if (t == n) {
            if (p > best[yi]) {
              best[yi] = p;
              dec.table[s_block + yi] = {wa, wb};
            }
            ++yi;
            return;
          }
          const int s = s_seq[static_cast<std::size_t>(t)];
          const int xa = x_a[static_cast<std::size_t>(t)][static_cast<std::size_t>(wa)];
          const int xb = x_b[static_cast<std::size_t>(t)][static_cast<std::size_t>(wb)];
          for (int y = 0; y < model.output_size; ++y) {
            const int kidx[4] = {s, xa, xb, y};
            self(self, t + 1, p * model.kernel.at(kidx));
          }
        };
        walk(walk, 0, 1.0);
      }
    }
    s_block += static_cast<std::size_t>(y_count);
  });
  return dec;
}

namespace {

// Error probability of the MAP rule without materializing the decoder:
// 1 - sum_{s,y} P(s) max_w P(y|s, x(w,s)) / |W|.
double map_error(const MacModel& model, const BlockEncoder& enc_a,
                 const BlockEncoder& enc_b) {
  const int n = enc_a.block_length;
  const std::uint64_t y_count = pow_u64(static_cast<std::uint64_t>(model.output_size), n);
  const double w_mass = 1.0 / (static_cast<double>(enc_a.message_count) *
                               static_cast<double>(enc_b.message_count));
  std::vector<double> best(static_cast<std::size_t>(y_count));
  double correct = 0.0;
  for_each_history(n, model.state_size(), [&](const std::vector<int>& s_seq) {
    const double ps = history_probability(model.state_prior, s_seq);
    if (ps == 0.0) return;
    std::fill(best.begin(), best.end(), 0.0);
    const auto x_a = inputs_for_states(model, enc_a, Side::A, s_seq);
    const auto x_b = inputs_for_states(model, enc_b, Side::B, s_seq);
    for (int wa = 0; wa < enc_a.message_count; ++wa) {
      for (int wb = 0; wb < enc_b.message_count; ++wb) {
        std::size_t yi = 0;
        auto walk = [&](auto&& self, int t, double p) -> void {
          if (t == n) {
            if (p > best[yi]) best[yi] = p;
            ++yi;
            return;
          }
          const int s = s_seq[static_cast<std::size_t>(t)];
          const int xa = x_a[static_cast<std::size_t>(t)][static_cast<std::size_t>(wa)];
          const int xb = x_b[static_cast<std::size_t>(t)][static_cast<std::size_t>(wb)];
          for (int y = 0; y < model.output_size; ++y) {
            const int kidx[4] = {s, xa, xb, y};
            self(self, t + 1, p * model.kernel.at(kidx));
          }
        };
        walk(walk, 0, 1.0);
      }
    }
    double sum_best = 0.0;
    for (double b : best) sum_best += b;
    correct += ps * w_mass * sum_best;
  });
  return 1.0 - correct;
}

BlockEncoder zero_encoder(const MacModel& model, Side side, int n, int message_count) {
  BlockEncoder enc;
  enc.message_count = message_count;
  enc.block_length = n;
  enc.obs_size = model.obs_size(side);
  enc.input_size = model.input_size(side);
  enc.maps.resize(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) {
    const std::uint64_t rows =
        sat_mul(static_cast<std::uint64_t>(message_count),
                pow_u64(static_cast<std::uint64_t>(enc.obs_size), t));
    enc.maps[static_cast<std::size_t>(t - 1)].assign(static_cast<std::size_t>(rows), 0);
  }
  return enc;
}

// Odometer step over all encoder tables; the last cell of the last map moves
// fastest. Returns false after the all-(X-1) table wraps back to all zeros.
bool next_encoder(BlockEncoder& enc) {
  for (int t = enc.block_length - 1; t >= 0; --t) {
    auto& map = enc.maps[static_cast<std::size_t>(t)];
    for (std::size_t i = map.size(); i-- > 0;) {
      if (static_cast<int>(++map[i]) < enc.input_size) return true;
      map[i] = 0;
    }
  }
  return false;
}

// Cap-checks an exhaustive encoder-pair sweep before any table is allocated.
void plan_pair_sweep(const MacModel& model, int n, int wa_count, int wb_count,
                     std::uint64_t pair_cap) {
  if (n < 1) throw ValidationError("code sweep: block length must be >= 1");
  if (wa_count < 1 || wb_count < 1)
    throw ValidationError("code sweep: message sets must be nonempty");

  auto table_cells = [n](int w_count, int obs_size) {
    std::uint64_t cells = 0;
    for (int t = 1; t <= n; ++t)
      cells += sat_mul(static_cast<std::uint64_t>(w_count),
                       pow_u64(static_cast<std::uint64_t>(obs_size), t));
    return cells;
  };
  const std::uint64_t cells_a = table_cells(wa_count, model.obs_size_a);
  const std::uint64_t cells_b = table_cells(wb_count, model.obs_size_b);
  if (cells_a > kJointAtomCap || cells_b > kJointAtomCap)
    throw CapExceededError("encoder tables of " +
                               std::to_string(std::max(cells_a, cells_b)) +
                               " cells exceed cap " + std::to_string(kJointAtomCap),
                           std::max(cells_a, cells_b));
  const std::uint64_t maps_a =
      pow_u64(static_cast<std::uint64_t>(model.input_size_a),
              static_cast<int>(std::min<std::uint64_t>(cells_a, 1024)));
  const std::uint64_t maps_b =
      pow_u64(static_cast<std::uint64_t>(model.input_size_b),
              static_cast<int>(std::min<std::uint64_t>(cells_b, 1024)));
  const std::uint64_t pairs = sat_mul(maps_a, maps_b);
  if (pairs > pair_cap)
    throw CapExceededError("encoder pair enumeration of " + std::to_string(pairs) +
                               " exceeds cap " + std::to_string(pair_cap),
                           pairs);
  const std::uint64_t atoms =
      sat_mul(sat_mul(static_cast<std::uint64_t>(wa_count),
                      static_cast<std::uint64_t>(wb_count)),
              sat_mul(pow_u64(static_cast<std::uint64_t>(model.state_size()), n),
                      pow_u64(static_cast<std::uint64_t>(model.output_size), n)));
  if (atoms > kJointAtomCap)
    throw CapExceededError("per-code enumeration of " + std::to_string(atoms) +
                               " atoms exceeds cap " + std::to_string(kJointAtomCap),
                           atoms);
}

}  // namespace

FanoBounds fano_bounds(const MacModel& model, const BlockCode& code) {
  FanoBounds out;
  out.error_probability = std::clamp(exact_error_probability(model, code), 0.0, 1.0);

  const int n = code.enc_a.block_length;
  const HistoryWeights weights = state_weights(n, model.state_prior);
  double ia = 0.0, ib = 0.0, isum = 0.0;
  for (const auto& [sigma, alpha] : weights.entries) {
    if (alpha == 0.0) continue;  // conditioning on a null history
    const int t = static_cast<int>(sigma.size()) + 1;
    const JointDistribution nu = empirical_joint_at(model, code.enc_a, code.enc_b, t, sigma);
    ia += alpha * cond_mutual_info(nu, {Var::Xa}, {Var::Y}, {Var::Xb, Var::S});
    ib += alpha * cond_mutual_info(nu, {Var::Xb}, {Var::Y}, {Var::Xa, Var::S});
    isum += alpha * cond_mutual_info(nu, {Var::Xa, Var::Xb}, {Var::Y}, {Var::S});
  }

  const double slack = out.error_probability < 1.0
                           ? eta(out.error_probability, model.output_size)
                           : std::numeric_limits<double>::infinity();
  out.bound_a = ia + slack;
  out.bound_b = ib + slack;
  out.bound_sum = isum + slack;
  return out;
}

BestCodeResult brute_force_best_code(const MacModel& model, int n, int wa_count,
                                     int wb_count, std::uint64_t pair_cap) {
  ensure_valid_model(model);
  plan_pair_sweep(model, n, wa_count, wb_count, pair_cap);

  BlockEncoder enc_a = zero_encoder(model, Side::A, n, wa_count);
  BlockEncoder enc_b = zero_encoder(model, Side::B, n, wb_count);

  BestCodeResult best;
  best.error_probability = 2.0;  // worse than any real probability
  std::uint64_t scanned = 0;

  // Pair order: encoder a outer, encoder b inner, both in table order; the
  // first code attaining the minimum wins.
  bool more_a = true;
  while (more_a) {
    bool more_b = true;
    while (more_b) {
      ++scanned;
      const double eps = map_error(model, enc_a, enc_b);
      if (eps < best.error_probability) {
        best.error_probability = eps;
        best.code.enc_a = enc_a;
        best.code.enc_b = enc_b;
      }
      if (best.error_probability == 0.0) break;  // cannot improve further
      more_b = next_encoder(enc_b);
    }
    if (best.error_probability == 0.0) break;
    more_a = next_encoder(enc_a);
  }

  best.pairs_searched = scanned;
  best.code.dec = map_decoder(model, best.code.enc_a, best.code.enc_b);
  return best;
}

void for_each_encoder_pair(const MacModel& model, int n, int wa_count, int wb_count,
                           std::uint64_t pair_cap,
                           const std::function<void(const BlockEncoder&,
                                                    const BlockEncoder&)>& fn) {
  ensure_valid_model(model);
  plan_pair_sweep(model, n, wa_count, wb_count, pair_cap);

  BlockEncoder enc_a = zero_encoder(model, Side::A, n, wa_count);
  bool more_a = true;
  while (more_a) {
    BlockEncoder enc_b = zero_encoder(model, Side::B, n, wb_count);
    bool more_b = true;
    while (more_b) {
      fn(enc_a, enc_b);
      more_b = next_encoder(enc_b);
    }
    more_a = next_encoder(enc_a);
  }
}

double simulate_block(const MacModel& model, const BlockCode& code, int trials,
                      std::uint64_t seed) {
  ensure_valid_model(model);
  check_code_shapes(model, code.enc_a, code.enc_b);
  if (trials < 1) throw ValidationError("simulate_block: trials must be >= 1");

  const int n = code.enc_a.block_length;
  Rng rng(seed);
  auto sample_from = [&rng](std::span<const double> dist) {
    const double u = rng.uniform01();
    double acc = 0.0;
    int last = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] <= 0.0) continue;
      acc += dist[i];
      last = static_cast<int>(i);
      if (u < acc) return last;
    }
    return last;  // u landed in the fp tail; return the last positive atom
  };

  std::vector<int> s_seq(static_cast<std::size_t>(n));
  std::vector<int> y_seq(static_cast<std::size_t>(n));
  std::vector<int> obs_a(static_cast<std::size_t>(n));
  std::vector<int> obs_b(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(model.output_size));
  int errors = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int wa = rng.below(code.enc_a.message_count);
    const int wb = rng.below(code.enc_b.message_count);
    for (int t = 0; t < n; ++t) {
      s_seq[static_cast<std::size_t>(t)] = sample_from(model.state_prior);
      obs_a[static_cast<std::size_t>(t)] =
          model.quantizer_a[static_cast<std::size_t>(s_seq[static_cast<std::size_t>(t)])];
      obs_b[static_cast<std::size_t>(t)] =
          model.quantizer_b[static_cast<std::size_t>(s_seq[static_cast<std::size_t>(t)])];
      const int xa = code.enc_a.input_at(
          t + 1, wa, std::span<const int>(obs_a.data(), static_cast<std::size_t>(t + 1)));
      const int xb = code.enc_b.input_at(
          t + 1, wb, std::span<const int>(obs_b.data(), static_cast<std::size_t>(t + 1)));
      for (int y = 0; y < model.output_size; ++y) {
        const int kidx[4] = {s_seq[static_cast<std::size_t>(t)], xa, xb, y};
        row[static_cast<std::size_t>(y)] = model.kernel.at(kidx);
      }
      y_seq[static_cast<std::size_t>(t)] = sample_from(row);
    }
    if (code.dec.decode(s_seq, y_seq) != std::make_pair(wa, wb)) ++errors;
  }
  return static_cast<double>(errors) / trials;
}

BlockEncoder random_encoder(const MacModel& model, Side side, int n, int message_count,
                            Rng& rng) {
  if (n < 1) throw ValidationError("random_encoder: block length must be >= 1");
  if (message_count < 1)
    throw ValidationError("random_encoder: message set must be nonempty");
  std::uint64_t cells = 0;
  for (int t = 1; t <= n; ++t)
    cells += sat_mul(static_cast<std::uint64_t>(message_count),
                     pow_u64(static_cast<std::uint64_t>(model.obs_size(side)), t));
  if (cells > kJointAtomCap)
    throw CapExceededError("encoder table of " + std::to_string(cells) +
                               " cells exceeds cap " + std::to_string(kJointAtomCap),
                           cells);
  BlockEncoder enc = zero_encoder(model, side, n, message_count);
  for (auto& map : enc.maps)
    for (auto& cell : map) cell = static_cast<std::uint8_t>(rng.below(enc.input_size));
  return enc;
}

}  // namespace macsi
