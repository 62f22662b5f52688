#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polar/interval.hpp"
#include "polar/nncs.hpp"
#include "polar/polynomial.hpp"

namespace polar {

/// Contents of a model file before the network is loaded.
///
///   states: x1, x2
///   controls: u
///   dynamics:
///     x1' = x2
///     x2' = -x1 + 0.5*u*x2^2
///   control_step: 0.1
///   init:
///     x1 in [0.9, 1.1]
///     x2 in [-0.1, 0.1]
///   target:                 (optional, followed by property)
///     x1 in [-2, 2]
///   property: reach | avoid
///   check_at: final | all   (optional)
///   network: controller.nnet
///
/// Expressions use + - * ^ ( ), decimal literals, declared names, and
/// division by constants. '#' starts a comment.
struct ModelFile {
  std::vector<std::string> states;
  std::vector<std::string> controls;
  std::vector<Polynomial> dynamics;  ///< per state, over states then controls
  double control_step = 0.0;
  IntervalVector init;
  std::optional<TargetSpec> property;
  std::string network;  ///< as written; relative paths resolve against the file

  friend bool operator==(const ModelFile& a, const ModelFile& b);
};

ModelFile parse_model(std::string_view text, const std::string& source_name = "<model>");
ModelFile read_model_file(const std::filesystem::path& path);

/// Canonical text form; parse_model(print_model(m)) == m.
std::string print_model(const ModelFile& m);

/// Polynomial in canonical text form over the given variable names.
std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& names);

/// Loads the network and assembles the verifier model. Throws IoError,
/// ParseError or DimensionError.
NNCSModel build_model(const ModelFile& file, const std::filesystem::path& base_dir);

struct LoadedModel {
  ModelFile file;
  NNCSModel model;
};

LoadedModel load_model(const std::filesystem::path& path);

}  // namespace polar
