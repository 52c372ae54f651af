#pragma once

#include <string>
#include <vector>

#include "macsi/model.hpp"
#include "macsi/rng.hpp"
#include "macsi/tensor.hpp"

namespace macsi::testing {

// Noiseless binary adder MAC: single state, Y = X_a + X_b in {0,1,2}.
inline MacModel adder_model() {
  MacModel m;
  m.state_prior = {1.0};
  m.input_size_a = 2;
  m.input_size_b = 2;
  m.output_size = 3;
  m.quantizer_a = {0};
  m.quantizer_b = {0};
  m.obs_size_a = 1;
  m.obs_size_b = 1;
  m.kernel = Tensor({1, 2, 2, 3});
  for (int xa = 0; xa < 2; ++xa) {
    for (int xb = 0; xb < 2; ++xb) {
      const int idx[4] = {0, xa, xb, xa + xb};
      m.kernel.at(idx) = 1.0;
    }
  }
  return m;
}

// Two equiprobable states: a clean state where Y = X_a xor X_b and a pure-noise
// state where Y is a fair coin. Encoder a sees the state, encoder b does not.
inline MacModel xorstate_model() {
  MacModel m;
  m.state_prior = {0.5, 0.5};
  m.input_size_a = 2;
  m.input_size_b = 2;
  m.output_size = 2;
  m.quantizer_a = {0, 1};
  m.quantizer_b = {0, 0};
  m.obs_size_a = 2;
  m.obs_size_b = 1;
  m.kernel = Tensor({2, 2, 2, 2});
  for (int xa = 0; xa < 2; ++xa) {
    for (int xb = 0; xb < 2; ++xb) {
      const int clean[4] = {0, xa, xb, xa ^ xb};
      m.kernel.at(clean) = 1.0;
      for (int y = 0; y < 2; ++y) {
        const int noise[4] = {1, xa, xb, y};
        m.kernel.at(noise) = 0.5;
      }
    }
  }
  return m;
}

// Binary output independent of both inputs; nothing gets through.
inline MacModel input_ignoring_model() {
  MacModel m;
  m.state_prior = {1.0};
  m.input_size_a = 2;
  m.input_size_b = 2;
  m.output_size = 2;
  m.quantizer_a = {0};
  m.quantizer_b = {0};
  m.obs_size_a = 1;
  m.obs_size_b = 1;
  m.kernel = Tensor({1, 2, 2, 2});
  for (std::size_t i = 0; i < m.kernel.size(); ++i) m.kernel[i] = 0.5;
  return m;
}

inline std::string fixture_path(const char* name) {
  return std::string(MACSI_FIXTURE_DIR) + "/" + name;
}

// Random normalized tensor over the given dims; exponential entries.
inline Tensor random_joint_tensor(std::vector<int> dims, Rng& rng) {
  Tensor t(std::move(dims));
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = rng.exponential();
    sum += t[i];
  }
  for (std::size_t i = 0; i < t.size(); ++i) t[i] /= sum;
  return t;
}

}  // namespace macsi::testing
