#pragma once

#include <stdexcept>
#include <string>

namespace gnep {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// lp / milp
class NumericalFailure : public Error {
 public:
  using Error::Error;
};
class DegenerateBasis : public Error {
 public:
  using Error::Error;
};
class NodeLimitExceeded : public Error {
 public:
  using Error::Error;
};
class UnboundedTermError : public Error {
 public:
  using Error::Error;
};

// model
class InfeasibleBestResponse : public Error {
 public:
  InfeasibleBestResponse(int player, const std::string& what)
      : Error(what), player_(player) {}
  int player() const noexcept { return player_; }

 private:
  int player_;
};
class EmptyDomain : public Error {
 public:
  using Error::Error;
};

// cuts
class NotAffineInRivals : public Error {
 public:
  using Error::Error;
};
class NonBinaryVariables : public Error {
 public:
  using Error::Error;
};
class NotInterior : public Error {
 public:
  using Error::Error;
};
class SingularRaySystem : public Error {
 public:
  using Error::Error;
};
class NoFiniteAlpha : public Error {
 public:
  using Error::Error;
};

// instances
class InvalidGraph : public Error {
 public:
  using Error::Error;
};
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed instance document. `field()` names the offending JSON path
/// (e.g. "players[1].ub") and `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string field, std::size_t line, const std::string& message)
      : Error(format(field, line, message)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line,
                            const std::string& message) {
    std::string out = "parse error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " in field '" + field + "'";
    return out + ": " + message;
  }

  std::string field_;
  std::size_t line_;
};

}  // namespace gnep
