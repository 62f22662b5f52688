#include "polar/errors.hpp"

#include <sstream>

namespace polar {

namespace {

std::string position_message(const std::string& source, std::size_t line, std::size_t column,
                             const std::string& message) {
  std::ostringstream os;
  os << source << ':' << line;
  if (column > 0) os << ':' << column;
  os << ": " << message;
  return os.str();
}

std::string contraction_message(std::size_t component, double width) {
  std::ostringstream os;
  os << "Picard operator not contractive: component " << component << " remainder width " << width
     << " after maximum inflations; reduce the flowpipe step size";
  return os.str();
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : Error(position_message(source, line, column, message)), line_(line), column_(column) {}

ContractionFailure::ContractionFailure(std::size_t component, double width)
    : Error(contraction_message(component, width)), component_(component), width_(width) {}

ContractionFailure ContractionFailure::at_flow_step(std::size_t i) const {
  ContractionFailure copy = *this;
  copy.flow_step_ = i;
  return copy;
}

ContractionFailure ContractionFailure::at_control_step(std::size_t i) const {
  ContractionFailure copy = *this;
  copy.control_step_ = i;
  return copy;
}

}  // namespace polar
