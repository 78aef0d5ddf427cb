#ifndef QNTTNN_ERRORS_HPP
#define QNTTNN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qnttnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (rates, penalties, ranks).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A real block matrix is not the embedding of any quaternion matrix.
class StructureViolation : public Error {
 public:
  explicit StructureViolation(double max_deviation)
      : Error("real matrix violates quaternion block structure (max deviation " +
              std::to_string(max_deviation) + ")"),
        max_deviation_(max_deviation) {}

  double max_deviation() const noexcept { return max_deviation_; }

 private:
  double max_deviation_;
};

/// Malformed or missing input data (frames, files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The solver produced a non-finite objective or broke a monitored invariant.
class SolverDivergence : public Error {
 public:
  using Error::Error;
};

}  // namespace qnttnn

#endif  // QNTTNN_ERRORS_HPP
