#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace foresee {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covariance factorization failed even after jitter escalation.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// A per-dimension sample variance underflowed; standardized moments undefined.
class DegenerateVarianceError : public Error {
 public:
  using Error::Error;
};

class NonPositiveShapeError : public Error {
 public:
  using Error::Error;
};

// Leader and follower positions coincide; bearing undefined.
class CoincidentAgentsError : public Error {
 public:
  using Error::Error;
};

class PolicyDomainError : public Error {
 public:
  using Error::Error;
};

class NonFiniteGradientError : public Error {
 public:
  using Error::Error;
};

class NonFiniteRowError : public Error {
 public:
  using Error::Error;
};

// A constraint is violated at a non-terminal prediction step, so neither the
// feasible update nor the terminal-slack update applies.
class InfeasiblePrefixError : public Error {
 public:
  InfeasiblePrefixError(const std::string& msg, int step, int constraint)
      : Error(msg), step(step), constraint(constraint) {}
  int step;
  int constraint;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class LpInfeasibleError : public Error {
 public:
  using Error::Error;
};

class QpInfeasibleError : public Error {
 public:
  QpInfeasibleError(const std::string& msg, std::vector<int> rows)
      : Error(msg), violated_rows(std::move(rows)) {}
  std::vector<int> violated_rows;  // certificate: mutually incompatible rows
};

// QP solution has a weakly active row; the solution map is not differentiable.
class DegenerateActiveSetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace foresee
