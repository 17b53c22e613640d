#pragma once

#include <stdexcept>
#include <string>

namespace tricomi {

/// Input outside the mathematical domain of an operation (poles, wrong sign,
/// parameter constraints).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Evaluation requested on a branch cut without an explicit branch choice.
class CutError : public DomainError {
 public:
  explicit CutError(const std::string& what) : DomainError(what) {}
};

/// Evaluation on a singular locus of a kernel (v = 0 for the n = 1 solutions).
class SingularLocusError : public DomainError {
 public:
  explicit SingularLocusError(const std::string& what) : DomainError(what) {}
};

/// A series or quadrature failed to reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate = 0.0)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Degenerate geometry (vanishing gradient on a layer surface, empty range).
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tricomi
