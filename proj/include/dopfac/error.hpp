#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dopfac {

// Domain error raised by the algebra layers (division by zero, bad shape,
// failed precondition). The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace dopfac
