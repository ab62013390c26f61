#ifndef CL4_ERROR_HPP
#define CL4_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cl4 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax (formulas, QBF text, QDIMACS, JSON artifacts).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A formula invariant does not hold, a path does not resolve, or a
/// substitution precondition is violated.
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// A rule instance is not applicable to its conclusion.
class RuleError : public Error {
 public:
  using Error::Error;
};

class DepthLimitExceeded : public Error {
 public:
  using Error::Error;
};

class QbfError : public Error {
 public:
  using Error::Error;
};

/// Strategy/proof correspondence failures (losing trees, non-canonical proofs).
class BridgeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cl4

#endif  // CL4_ERROR_HPP
