#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polar/interval.hpp"

namespace polar {

/// Dense row-major matrix.
template <typename T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1.0};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using IntervalMatrix = BasicMatrix<Interval>;

/// Interval enclosure of a point matrix.
IntervalMatrix to_interval(const Matrix& m);

/// Outward-rounded product; throws DimensionError on shape mismatch.
IntervalMatrix multiply(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalVector multiply(const IntervalMatrix& a, std::span<const Interval> x);

std::vector<double> multiply(const Matrix& a, std::span<const double> x);

}  // namespace polar
