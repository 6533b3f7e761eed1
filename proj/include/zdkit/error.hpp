#pragma once

#include <stdexcept>
#include <string>

namespace zdkit {

enum class ErrorKind {
  domain,      // argument outside the operation's domain
  dimension,   // shape mismatch between operands
  validation,  // malformed probability data
  analysis,    // a Markov premise (e.g. primitivity) does not hold
  numeric,     // solver did not converge or lost accuracy
  capacity,    // problem too large for the requested route
  parse,       // malformed input document
  io,          // filesystem failure
  internal,    // broken internal identity
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace zdkit
