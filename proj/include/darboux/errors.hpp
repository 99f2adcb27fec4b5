#pragma once

#include <stdexcept>
#include <string>

namespace darboux {

/// Invalid argument to a library call: bad grid bounds, point counts below the
/// minimum, mismatched grids, out-of-range base points, and similar misuse.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A sampled callable produced a non-finite value at a grid node.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};

/// A transformation function vanishes (changes sign) on the grid where the
/// requested construction needs it to be nodeless.
class NodalSeedError : public std::runtime_error {
 public:
  explicit NodalSeedError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A function presented as a solution fails its equation beyond the caller's
/// tolerance.
class NotASolutionError : public std::runtime_error {
 public:
  explicit NotASolutionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// An intermediate function of a transformation chain vanishes, so the next
/// step cannot be built; also raised when a seed pair is linearly dependent
/// and its Wronskian vanishes identically.
class DegenerateChainError : public std::runtime_error {
 public:
  explicit DegenerateChainError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A kernel/integral denominator touches or crosses zero on the grid.
class SingularDenominatorError : public std::runtime_error {
 public:
  explicit SingularDenominatorError(const std::string& what)
      : std::runtime_error(what) {}
};

/// An initial-value integration blew up (exponential overflow) before
/// reaching the end of the grid.
class IntegrationOverflowError : public std::runtime_error {
 public:
  explicit IntegrationOverflowError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace darboux
