#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vipclip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameter values or inconsistent inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A probe or bound needs a structural constant the problem does not certify.
class MissingConstant : public Error {
 public:
  using Error::Error;
};

// A documented precondition of a statistical statement does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_dim(Eigen::Index got, Eigen::Index want,
                        const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace vipclip
