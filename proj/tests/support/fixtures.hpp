#pragma once
// Shared test fixtures: hand-built networks and Taylor models.

#include <cmath>
#include <random>
#include <vector>

#include "polar/neural_network.hpp"
#include "polar/taylor_model.hpp"

namespace fixtures {

inline polar::Monomial mono(std::initializer_list<unsigned> exps) {
  polar::Monomial m;
  std::size_t i = 0;
  for (unsigned e : exps) m.set(i++, e);
  return m;
}

/// Input TMs of the two-layer sigmoid example, over z in [-1, 1]^2:
/// 1 - 0.5 z1 + z2 - 0.3 z1 z2 + [-0.1, 0.1] and -2 + z2 - 0.1 z1^2 + [-0.2, 0.2].
inline polar::TMVector two_layer_inputs(unsigned order = 2) {
  using polar::Interval;
  using polar::Polynomial;
  const polar::Domain d = polar::Domain::unit_box(2);
  const Polynomial a = Polynomial::from_terms(
      2, {{mono({0, 0}), 1.0}, {mono({1, 0}), -0.5}, {mono({0, 1}), 1.0}, {mono({1, 1}), -0.3}});
  const Polynomial b = Polynomial::from_terms(2, {{mono({0, 0}), -2.0}, {mono({0, 1}), 1.0}, {mono({2, 0}), -0.1}});
  return polar::TMVector(
      {polar::TaylorModel(a, Interval(-0.1, 0.1), d, order), polar::TaylorModel(b, Interval(-0.2, 0.2), d, order)});
}

/// Dense layer with weights N(0, gain / sqrt(cols)) and biases N(0, 0.1).
inline polar::Layer random_layer(std::mt19937_64& rng, std::size_t rows, std::size_t cols, polar::Activation act,
                                 double gain = 1.0) {
  std::normal_distribution<double> w(0.0, gain / std::sqrt(static_cast<double>(cols)));
  std::normal_distribution<double> b(0.0, 0.1);
  polar::Layer l{polar::Matrix(rows, cols), std::vector<double>(rows), act};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) l.weights(r, c) = w(rng);
    l.bias[r] = b(rng);
  }
  return l;
}

/// Network with `hidden` hidden layers of random widths in [min_w, max_w] and
/// activations drawn from `acts`; identity output layer.
inline polar::NeuralNetwork random_network(std::mt19937_64& rng, std::size_t inputs, std::size_t outputs,
                                           std::size_t hidden, std::size_t min_w, std::size_t max_w,
                                           const std::vector<polar::Activation>& acts) {
  std::uniform_int_distribution<std::size_t> width(min_w, max_w);
  std::uniform_int_distribution<std::size_t> pick(0, acts.size() - 1);
  std::vector<polar::Layer> layers;
  std::size_t prev = inputs;
  for (std::size_t i = 0; i < hidden; ++i) {
    const std::size_t w = width(rng);
    layers.push_back(random_layer(rng, w, prev, acts[pick(rng)]));
    prev = w;
  }
  layers.push_back(random_layer(rng, outputs, prev, polar::Activation::identity));
  return polar::NeuralNetwork(std::move(layers));
}

/// 2x2 rotation by theta.
inline polar::Matrix rotation(double theta) {
  polar::Matrix m(2, 2);
  m(0, 0) = std::cos(theta);
  m(0, 1) = -std::sin(theta);
  m(1, 0) = std::sin(theta);
  m(1, 1) = std::cos(theta);
  return m;
}

/// `depth` identity-activation layers, each a rotation by theta.
inline polar::NeuralNetwork rotation_chain(std::size_t depth, double theta) {
  std::vector<polar::Layer> layers;
  for (std::size_t i = 0; i < depth; ++i)
    layers.push_back(polar::Layer{rotation(theta), {0.0, 0.0}, polar::Activation::identity});
  return polar::NeuralNetwork(std::move(layers));
}

/// Random TM vector over z in [-1, 1]^n: affine in z with small quadratic
/// terms and remainders of radius up to max_rem.
inline polar::TMVector random_input(std::mt19937_64& rng, std::size_t n, unsigned order, double max_rem) {
  std::uniform_real_distribution<double> c(-1, 1), u(0, 1);
  const polar::Domain d = polar::Domain::unit_box(n);
  std::vector<polar::TaylorModel> comps;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<polar::Term> terms{{polar::Monomial{}, c(rng)}};
    for (std::size_t v = 0; v < n; ++v) {
      terms.push_back({polar::Monomial::unit(v), 0.2 * c(rng)});
      if (order >= 2) terms.push_back({polar::Monomial::unit(v, 2), 0.02 * c(rng)});
    }
    const double r = max_rem * u(rng);
    comps.emplace_back(polar::Polynomial::from_terms(n, terms), polar::Interval(-r, r), d, order);
  }
  return polar::TMVector(std::move(comps));
}

}  // namespace fixtures
