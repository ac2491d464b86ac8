#pragma once

#include <stdexcept>
#include <string>

namespace potent {

// Common base so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct FieldMismatch : Error {
  explicit FieldMismatch(const std::string& what) : Error(what) {}
};

struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

// Input matrix has minimal polynomial of degree < n, so it has no companion form.
struct NotNonderogatory : Error {
  explicit NotNonderogatory(const std::string& what) : Error(what) {}
};

// trace(A) is not an integer multiple of 1; no decomposition exists at all.
struct TraceNotPrimeSubfield : Error {
  explicit TraceNotPrimeSubfield(const std::string& what) : Error(what) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& what) : Error(what) {}
};

// The trailing block completion search came up empty for the given (k, a, l).
struct CompletionFailed : Error {
  explicit CompletionFailed(const std::string& what) : Error(what) {}
};

// No admissible scalar parameter exists for the attempted route.
struct NoViableA : Error {
  explicit NoViableA(const std::string& what) : Error(what) {}
};

// The shifted assembly produced E with E^3 != E under both sign normalizations.
struct TripotencyFailed : Error {
  explicit TripotencyFailed(const std::string& what) : Error(what) {}
};

// Every route, including the brute-force oracle, failed to certify the input.
struct Unverifiable : Error {
  explicit Unverifiable(const std::string& what) : Error(what) {}
};

struct SearchSpaceTooLarge : Error {
  explicit SearchSpaceTooLarge(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
  ParseError(const std::string& what, int line, int column)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct InternalError : Error {
  explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

}  // namespace potent
