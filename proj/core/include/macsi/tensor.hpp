#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace macsi {

// Dense row-major tensor of doubles with small dynamic rank. All probability
// objects in the library (kernels, joints) live in one of these.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims);

  int rank() const { return static_cast<int>(dims_.size()); }
  int dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  std::size_t flat_index(std::span<const int> idx) const;
  double at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
  double& at(std::span<const int> idx) { return data_[flat_index(idx)]; }

  // Decomposes a flat index into per-axis coordinates (idx.size() == rank()).
  void unravel(std::size_t flat, std::span<int> idx) const;

  double sum() const;

  bool same_shape(const Tensor& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
};

}  // namespace macsi
