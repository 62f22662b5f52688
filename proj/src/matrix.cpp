#include "polar/matrix.hpp"

#include "polar/errors.hpp"

namespace polar {

IntervalMatrix to_interval(const Matrix& m) {
  IntervalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Interval(m(i, j));
  return r;
}

IntervalMatrix multiply(const IntervalMatrix& a, const IntervalMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("interval matrix product shape mismatch");
  IntervalMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Interval aik = a(i, k);
      if (aik.lo() == 0.0 && aik.hi() == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

IntervalVector multiply(const IntervalMatrix& a, std::span<const Interval> x) {
  if (a.cols() != x.size()) throw DimensionError("interval matrix-vector shape mismatch");
  IntervalVector r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) r[i] += a(i, k) * x[k];
  return r;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
  std::vector<double> r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) r[i] += a(i, k) * x[k];
  return r;
}

}  // namespace polar
