#pragma once

#include <stdexcept>
#include <string>

namespace oseen_ale {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cell of a configuration has a non-positive Jacobian determinant.
class InvertedCell : public Error {
 public:
  InvertedCell(int cell, double time, double determinant)
      : Error("inverted cell " + std::to_string(cell) + " at t=" + std::to_string(time) +
              " (det=" + std::to_string(determinant) + ")"),
        cell_(cell),
        time_(time),
        determinant_(determinant) {}

  [[nodiscard]] int cell() const noexcept { return cell_; }
  [[nodiscard]] double time() const noexcept { return time_; }
  [[nodiscard]] double determinant() const noexcept { return determinant_; }

 private:
  int cell_;
  double time_;
  double determinant_;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class NegativeViscosity : public Error {
 public:
  using Error::Error;
};

class WrongVariant : public Error {
 public:
  using Error::Error;
};

class ConditionViolated : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oseen_ale
