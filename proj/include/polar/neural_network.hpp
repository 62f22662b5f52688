#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polar/interval.hpp"
#include "polar/matrix.hpp"

namespace polar {

enum class Activation { relu, sigmoid, tanh, identity };

std::string_view to_string(Activation a) noexcept;
std::optional<Activation> parse_activation(std::string_view tag) noexcept;

double activation_eval(Activation a, double y) noexcept;

/// Enclosure of {sigma(y) | y in Y}, allowing for libm error.
Interval activation_range(Activation a, const Interval& Y) noexcept;

/// Upper bound on the Lipschitz constant of the activation over Y.
double activation_lipschitz(Activation a, const Interval& Y) noexcept;

struct Layer {
  Matrix weights;             ///< rows = neurons in this layer, cols = previous layer width
  std::vector<double> bias;   ///< one per neuron
  Activation activation = Activation::identity;
};

/// Feed-forward network; all neurons of a layer share one activation.
class NeuralNetwork {
 public:
  NeuralNetwork() = default;
  /// Throws DimensionError when consecutive layer shapes do not chain.
  explicit NeuralNetwork(std::vector<Layer> layers);

  std::size_t input_dim() const noexcept;
  std::size_t output_dim() const noexcept;
  std::size_t num_layers() const noexcept { return layers_.size(); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  std::vector<double> forward(std::span<const double> x) const;

 private:
  std::vector<Layer> layers_;
};

/// Reads the line-oriented network format:
///   n_inputs, n_outputs, M (hidden layers), M hidden widths,
///   M+1 activation tags, then per layer and neuron the incoming weights
///   followed by the bias. One token per line; '#' starts a comment line.
NeuralNetwork parse_network(std::istream& in, const std::string& source_name = "<network>");
NeuralNetwork load_network(const std::filesystem::path& path);

/// Writes the format read by parse_network; values round-trip exactly.
void write_network(std::ostream& out, const NeuralNetwork& net);

}  // namespace polar
