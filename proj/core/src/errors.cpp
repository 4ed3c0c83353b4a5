#include "lrsplit/errors.hpp"

namespace lrsplit {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

FactorizationError::FactorizationError(const std::string& what, std::size_t index)
    : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}

}  // namespace lrsplit
