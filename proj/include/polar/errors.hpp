#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes, variable counts, domains or orders do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed model or network file. Line and column are 1-based; column is 0
/// when the error is not tied to a position within the line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The Picard operator could not be shown contractive on any candidate
/// remainder. The caller should reduce the flowpipe step size.
class ContractionFailure : public Error {
 public:
  ContractionFailure(std::size_t component, double width);

  std::size_t component() const noexcept { return component_; }
  double width() const noexcept { return width_; }

  /// Index of the flowpipe step within its control step (0-based).
  std::size_t flow_step() const noexcept { return flow_step_; }
  /// Index of the control step (0-based).
  std::size_t control_step() const noexcept { return control_step_; }

  ContractionFailure at_flow_step(std::size_t i) const;
  ContractionFailure at_control_step(std::size_t i) const;

 private:
  std::size_t component_;
  double width_;
  std::size_t flow_step_ = 0;
  std::size_t control_step_ = 0;
};

/// Simulation produced a non-finite state.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace polar
