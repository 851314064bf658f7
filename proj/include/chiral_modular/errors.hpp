#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chiral_modular {

/// Bad argument (out-of-range index, zero covering order, unknown color, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two insertion points closer than the configured minimum separation.
class SingularConfiguration : public std::runtime_error {
 public:
  SingularConfiguration(const std::string& what, std::size_t i, std::size_t j)
      : std::runtime_error(what), first(i), second(j) {}
  std::size_t first;
  std::size_t second;
};

/// Two distinct points whose n-th powers coincide; the modified state is not
/// faithful on any region containing both.
class OppositePoints : public std::runtime_error {
 public:
  OppositePoints(const std::string& what, std::size_t i, std::size_t j)
      : std::runtime_error(what), first(i), second(j) {}
  std::size_t first;
  std::size_t second;
};

/// An insertion outside every interval of a localized state.
class LocalizationError : public std::runtime_error {
 public:
  LocalizationError(const std::string& what, std::size_t index)
      : std::runtime_error(what), point(index) {}
  std::size_t point;
};

/// The continuation path t + i s runs into a correlator singularity.
class PathSingularity : public std::runtime_error {
 public:
  PathSingularity(const std::string& what, double s)
      : std::runtime_error(what), strip_parameter(s) {}
  double strip_parameter;
};

/// Derivative requested at a pole or a branch point of the root.
class SingularPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chiral_modular
