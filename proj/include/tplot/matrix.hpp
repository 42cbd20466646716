// Copyright 2026 The tplot Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace tplot {

// Dense n x n matrix of doubles, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int size() const noexcept { return n_; }

  double& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
  double operator()(int i, int j) const noexcept { return data_[index(i, j)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double row_sum(int i) const noexcept {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j);
    return s;
  }
  double col_sum(int j) const noexcept {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }
  double total() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
  }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  SquareMatrix& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }

  bool operator==(const SquareMatrix&) const = default;

  static SquareMatrix identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<double> data_;
};

// A traffic matrix D: D(i, j) is the demand from node i to node j.
using TrafficMatrix = SquareMatrix;

// Permutation as image vector: sigma[i] = destination of row i.
using Permutation = std::vector<int>;

inline TrafficMatrix permutation_matrix(const Permutation& sigma) {
  TrafficMatrix d(static_cast<int>(sigma.size()));
  for (std::size_t i = 0; i < sigma.size(); ++i) d(static_cast<int>(i), sigma[i]) = 1.0;
  return d;
}

}  // namespace tplot
