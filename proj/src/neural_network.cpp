#include "polar/neural_network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "polar/errors.hpp"
#include "util.hpp"

namespace polar {

namespace {

// Relative slack for libm results (exp, tanh are faithful to a few ulps).
constexpr double kLibmSlack = 16 * 0x1p-53;

double sigmoid(double y) noexcept { return 1.0 / (1.0 + std::exp(-y)); }

Interval inflate_libm(double lo, double hi) noexcept {
  const double slo = std::fabs(lo) * kLibmSlack + 0x1p-1000;
  const double shi = std::fabs(hi) * kLibmSlack + 0x1p-1000;
  return Interval(rounding::sub_down(lo, slo), rounding::add_up(hi, shi));
}

class TokenReader {
 public:
  TokenReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  double number(const std::string& what) {
    const std::string tok = next(what);
    double v = 0.0;
    if (!detail::parse_double(tok, v)) fail("expected a number for " + what + ", got '" + tok + "'");
    return v;
  }

  std::size_t count(const std::string& what) {
    const std::string tok = next(what);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      fail("expected a non-negative integer for " + what + ", got '" + tok + "'");
    return v;
  }

  std::string next(const std::string& what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const std::string_view t = detail::trim(line);
      if (t.empty() || t.front() == '#') continue;
      return std::string(t);
    }
    ++line_no_;
    throw ParseError(source_, line_no_, 0, "unexpected end of file: missing " + what);
  }

  void expect_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const std::string_view t = detail::trim(line);
      if (!t.empty() && t.front() != '#') fail("unexpected trailing content '" + std::string(t) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(source_, line_no_, 0, msg); }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

std::optional<Activation> parse_activation(std::string_view tag) noexcept {
  if (tag == "relu") return Activation::relu;
  if (tag == "sigmoid") return Activation::sigmoid;
  if (tag == "tanh") return Activation::tanh;
  if (tag == "identity" || tag == "linear") return Activation::identity;
  return std::nullopt;
}

double activation_eval(Activation a, double y) noexcept {
  switch (a) {
    case Activation::relu: return y > 0.0 ? y : 0.0;
    case Activation::sigmoid: return sigmoid(y);
    case Activation::tanh: return std::tanh(y);
    case Activation::identity: return y;
  }
  return y;
}

Interval activation_range(Activation a, const Interval& Y) noexcept {
  switch (a) {
    case Activation::relu: return Interval(std::max(Y.lo(), 0.0), std::max(Y.hi(), 0.0));
    case Activation::identity: return Y;
    case Activation::sigmoid: {
      const Interval r = inflate_libm(sigmoid(Y.lo()), sigmoid(Y.hi()));
      return Interval(std::max(r.lo(), 0.0), std::min(r.hi(), 1.0));
    }
    case Activation::tanh: {
      const Interval r = inflate_libm(std::tanh(Y.lo()), std::tanh(Y.hi()));
      return Interval(std::max(r.lo(), -1.0), std::min(r.hi(), 1.0));
    }
  }
  return Interval::entire();
}

double activation_lipschitz(Activation a, const Interval& Y) noexcept {
  // sigmoid' and tanh' are even and decreasing in |y|; the supremum is at
  // the point of Y closest to zero.
  const double closest = std::clamp(0.0, Y.lo(), Y.hi());
  switch (a) {
    case Activation::relu: return Y.hi() > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
    case Activation::sigmoid: {
      if (closest == 0.0) return 0.25;
      const double s = sigmoid(closest);
      return std::min(0.25, s * (1.0 - s) * (1.0 + kLibmSlack) + 0x1p-1000);
    }
    case Activation::tanh: {
      if (closest == 0.0) return 1.0;
      const double t = std::tanh(closest);
      return std::min(1.0, (1.0 - t * t) * (1.0 + kLibmSlack) + 4 * 0x1p-53);
    }
  }
  return 1.0;
}

NeuralNetwork::NeuralNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.weights.rows() == 0 || l.weights.cols() == 0) throw DimensionError("layer " + std::to_string(i + 1) + " is empty");
    if (l.bias.size() != l.weights.rows())
      throw DimensionError("layer " + std::to_string(i + 1) + " bias length does not match its neuron count");
    if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows())
      throw DimensionError("layer " + std::to_string(i + 1) + " expects " + std::to_string(l.weights.cols()) +
                           " inputs but layer " + std::to_string(i) + " has " +
                           std::to_string(layers_[i - 1].weights.rows()) + " neurons");
  }
}

std::size_t NeuralNetwork::input_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().weights.cols(); }
std::size_t NeuralNetwork::output_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().weights.rows(); }

std::vector<double> NeuralNetwork::forward(std::span<const double> x) const {
  if (x.size() != input_dim())
    throw DimensionError("network expects " + std::to_string(input_dim()) + " inputs, got " + std::to_string(x.size()));
  std::vector<double> cur(x.begin(), x.end());
  for (const Layer& l : layers_) {
    std::vector<double> next = multiply(l.weights, cur);
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = activation_eval(l.activation, next[j] + l.bias[j]);
    cur = std::move(next);
  }
  return cur;
}

NeuralNetwork parse_network(std::istream& in, const std::string& source_name) {
  TokenReader r(in, source_name);
  const std::size_t n_in = r.count("input count");
  const std::size_t n_out = r.count("output count");
  const std::size_t hidden = r.count("hidden layer count");
  if (n_in == 0 || n_out == 0) r.fail("input and output counts must be positive");

  std::vector<std::size_t> widths{n_in};
  for (std::size_t i = 0; i < hidden; ++i) {
    const std::size_t w = r.count("width of hidden layer " + std::to_string(i + 1));
    if (w == 0) r.fail("hidden layer " + std::to_string(i + 1) + " has no neurons");
    widths.push_back(w);
  }
  widths.push_back(n_out);

  std::vector<Activation> acts;
  for (std::size_t i = 0; i <= hidden; ++i) {
    const std::string tag = r.next("activation of layer " + std::to_string(i + 1));
    const auto a = parse_activation(tag);
    if (!a) r.fail("unknown activation '" + tag + "' (expected relu, sigmoid, tanh or identity)");
    acts.push_back(*a);
  }

  std::vector<Layer> layers;
  for (std::size_t i = 0; i <= hidden; ++i) {
    Layer l;
    l.weights = Matrix(widths[i + 1], widths[i]);
    l.bias.resize(widths[i + 1]);
    l.activation = acts[i];
    for (std::size_t j = 0; j < widths[i + 1]; ++j) {
      const std::string where = "layer " + std::to_string(i + 1) + " neuron " + std::to_string(j + 1);
      for (std::size_t k = 0; k < widths[i]; ++k)
        l.weights(j, k) = r.number("weight " + std::to_string(k + 1) + " of " + where);
      l.bias[j] = r.number("bias of " + where);
    }
    layers.push_back(std::move(l));
  }
  r.expect_end();
  return NeuralNetwork(std::move(layers));
}

NeuralNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network file '" + path.string() + "'");
  return parse_network(in, path.string());
}

void write_network(std::ostream& out, const NeuralNetwork& net) {
  const auto& layers = net.layers();
  out << net.input_dim() << '\n' << net.output_dim() << '\n' << layers.size() - 1 << '\n';
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) out << layers[i].weights.rows() << '\n';
  for (const Layer& l : layers) out << to_string(l.activation) << '\n';
  for (const Layer& l : layers)
    for (std::size_t j = 0; j < l.weights.rows(); ++j) {
      for (std::size_t k = 0; k < l.weights.cols(); ++k) out << detail::format_double(l.weights(j, k)) << '\n';
      out << detail::format_double(l.bias[j]) << '\n';
    }
}

}  // namespace polar
