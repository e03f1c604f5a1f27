#include "honeytrap/errors.hpp"

namespace honeytrap {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace honeytrap
