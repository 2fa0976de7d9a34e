#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace galmon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed system source or perm-script text; carries a 1-based position.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class InvalidSystem : public Error {
public:
  using Error::Error;
};

/// A rational function was evaluated at (or numerically near) a pole.
class EvaluationSingular : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

/// The Jacobian at a seed pair does not have full column rank.
class RankDeficient : public Error {
public:
  using Error::Error;
};

class DegeneratePolynomial : public Error {
public:
  using Error::Error;
};

class DegeneratePath : public Error {
public:
  using Error::Error;
};

class TrackFailureRate : public Error {
public:
  using Error::Error;
};

class MixedDegree : public Error {
public:
  using Error::Error;
};

class NotTransitive : public Error {
public:
  using Error::Error;
};

class InvalidBlocks : public Error {
public:
  using Error::Error;
};

/// Galois width is only computed for groups the recursion can decompose.
class UnsupportedGroup : public Error {
public:
  UnsupportedGroup(const std::string& order, std::size_t degree)
      : Error("unsupported group: primitive, non-solvable, not natural Sym/Alt (order " + order +
              ", degree " + std::to_string(degree) + ")"),
        order_(order),
        degree_(degree) {}

  const std::string& order() const { return order_; }
  std::size_t degree() const { return degree_; }

private:
  std::string order_;
  std::size_t degree_;
};

class DegenerateSample : public Error {
public:
  using Error::Error;
};

class SingularCayley : public Error {
public:
  using Error::Error;
};

class DegenerateInstance : public Error {
public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
public:
  using Error::Error;
};

class IsotropicTranslation : public Error {
public:
  using Error::Error;
};

class NoInlierSample : public Error {
public:
  using Error::Error;
};

class InvalidProbability : public Error {
public:
  using Error::Error;
};

}  // namespace galmon
