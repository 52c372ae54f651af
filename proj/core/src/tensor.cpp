#include "macsi/tensor.hpp"

#include <numeric>
#include <stdexcept>

namespace macsi {

Tensor::Tensor(std::vector<int> dims) : dims_(std::move(dims)) {
  strides_.resize(dims_.size());
  std::size_t n = 1;
  for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
    if (dims_[static_cast<std::size_t>(i)] <= 0)
      throw std::invalid_argument("Tensor: dimensions must be positive");
    strides_[static_cast<std::size_t>(i)] = n;
    n *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(i)]);
  }
  data_.assign(n, 0.0);
}

std::size_t Tensor::flat_index(std::span<const int> idx) const {
  std::size_t f = 0;
  for (std::size_t i = 0; i < strides_.size(); ++i)
    f += strides_[i] * static_cast<std::size_t>(idx[i]);
  return f;
}

void Tensor::unravel(std::size_t flat, std::span<int> idx) const {
  for (std::size_t i = 0; i < strides_.size(); ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
}

double Tensor::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

}  // namespace macsi
