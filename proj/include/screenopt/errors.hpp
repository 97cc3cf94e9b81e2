#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace screenopt {

/// Malformed diagram content encountered during evaluation (e.g. a missing CPT row).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed its configured ceiling.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The frontier generator used more scalarized solves than allowed.
class IterationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Budget pruning removed every strategy history.
class EmptyFrontierError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical precondition broken by the caller (division guard, negative mass, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input document failed validation. Each issue is prefixed with its field path.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += "; ";
      out += i;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

/// Two independent routes disagreed (e.g. frontier vs brute-force filter).
class OracleMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace screenopt
