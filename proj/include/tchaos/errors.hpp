#pragma once
#include <stdexcept>
#include <string>

namespace tchaos {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StructuralError : std::logic_error {
  using std::logic_error::logic_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace tchaos
