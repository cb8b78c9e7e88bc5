#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qnd {

// Rejected input: bad shape, broken state invariant, malformed scenario.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A pair of operators fails to commute within tolerance, so the interaction
// is not nondestructive.
class CommutatorViolation : public ValidationError {
 public:
  CommutatorViolation(std::string first, std::string second, double absolute,
                      double relative, double tolerance)
      : ValidationError("commutator violation: [" + first + ", " + second +
                        "] has Frobenius norm " + std::to_string(absolute) +
                        " (relative " + std::to_string(relative) +
                        " > tolerance " + std::to_string(tolerance) + ")"),
        first_(std::move(first)),
        second_(std::move(second)),
        absolute_(absolute),
        relative_(relative) {}

  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }
  double absolute() const { return absolute_; }
  double relative() const { return relative_; }

 private:
  std::string first_;
  std::string second_;
  double absolute_;
  double relative_;
};

class JointDiagonalizationFailure : public ValidationError {
 public:
  explicit JointDiagonalizationFailure(double residual)
      : ValidationError("joint diagonalization left off-diagonal residual " +
                        std::to_string(residual)),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// The coherence weight of a pair vanishes, so its normalized effect density
// is undefined; callers treat the pair's off-diagonal term as zero.
class ZeroWeightError : public ValidationError {
 public:
  ZeroWeightError(std::size_t m, std::size_t n)
      : ValidationError("pair (" + std::to_string(m) + ", " +
                        std::to_string(n) +
                        ") carries no coherence; effect density undefined"),
        m_(m),
        n_(n) {}

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

 private:
  std::size_t m_;
  std::size_t n_;
};

// The factorized representation was requested at a time where the per-pulse
// integral impacts do not coincide.
class NonUniformImpact : public std::runtime_error {
 public:
  explicit NonUniformImpact(double time)
      : std::runtime_error("integral impacts are not uniform at t = " +
                           std::to_string(time) +
                           "; factorized form invalid there"),
        time_(time) {}

  double time() const { return time_; }

 private:
  double time_;
};

// A postcondition the module promises failed to hold on computed output.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qnd
