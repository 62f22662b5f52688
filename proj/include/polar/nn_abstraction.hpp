#pragma once

#include <cstddef>

#include "polar/interval.hpp"
#include "polar/neural_network.hpp"
#include "polar/polynomial.hpp"
#include "polar/taylor_model.hpp"

namespace polar {

enum class RemainderMode {
  sampled,   ///< max sampled error plus a fixed width/m slack
  rigorous,  ///< max sampled error plus a Lipschitz-based covering slack
};

/// Univariate polynomial approximation of an activation on an input range.
/// The polynomial is expanded around the midpoint of the range, which keeps
/// its coefficients well conditioned when the range is narrow.
struct BernsteinApprox {
  Polynomial poly;      ///< over one variable s = y - center
  double center = 0.0;  ///< midpoint of input_range
  Interval rem;         ///< symmetric remainder [-eps, eps]
  Interval input_range;
  bool exact = false;  ///< poly equals the activation on the whole range
};

/// Degree-k Bernstein interpolant of the activation on Y, in monomials of y.
/// A point range gives the constant activation value. When the activation is
/// affine on Y the interpolant is that affine function.
Polynomial bernstein_interpolate(Activation act, const Interval& Y, unsigned k);

/// Symmetric remainder [-eps, eps] from m midpoint samples c_i of Y, for a
/// polynomial p in monomials of y.
Interval bernstein_remainder(Activation act, const Polynomial& p, const Interval& Y, unsigned m, RemainderMode mode);

/// Interpolant around the midpoint of Y plus its remainder. Exact
/// interpolants get a zero remainder. Ranges narrower than about 1e-12
/// relative to their magnitude are treated as points: the approximation is
/// the constant activation value at the midpoint and the remainder encloses
/// the activation over Y.
BernsteinApprox bernstein_approx(Activation act, const Interval& Y, unsigned k, unsigned m, RemainderMode mode);

struct AbstractionConfig {
  unsigned bernstein_order = 2;
  unsigned samples = 100;
  RemainderMode mode = RemainderMode::sampled;
};

/// Instrumentation for the cost comparison of the two propagation paths.
struct OpCounters {
  std::size_t linear_maps = 0;      ///< TM vector linear maps (one per layer)
  std::size_t matrix_products = 0;  ///< interval matrix-matrix products
  std::size_t matrix_vector = 0;    ///< interval matrix-vector products

  std::size_t total() const noexcept { return linear_maps + matrix_products + matrix_vector; }
};

/// Layer-by-layer TM propagation through the network. The result encloses
/// the network output point-wise over the input TM's domain.
TMVector nn_output_tm(const NeuralNetwork& net, const TMVector& input, const AbstractionConfig& cfg,
                      OpCounters* counters = nullptr);

/// Same contract, but the linear part of each layer's remainder map is kept
/// as a chain of interval matrices so remainders are not boxed per layer.
TMVector nn_output_tm_symbolic(const NeuralNetwork& net, const TMVector& input, const AbstractionConfig& cfg,
                               OpCounters* counters = nullptr);

}  // namespace polar
