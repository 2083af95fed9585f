#pragma once

#include <stdexcept>
#include <string>

namespace spr {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  dimension,      // mismatched lengths, wrong subspace dimension, degenerate basis
  domain,         // parameter outside its admissible range
  degenerate_span,
  not_certified,
  surrogate_quality,
  format,         // malformed input file
  numerical,
  usage,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace spr
