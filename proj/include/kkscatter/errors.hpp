#pragma once

#include <stdexcept>
#include <string>

namespace kkscatter {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (position off the medium, bad count, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or unparsable run configuration, unknown sweep parameter or figure id.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement hit its cap before meeting the tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last, double previous)
      : Error(what), last_(last), previous_(previous) {}

  double last() const noexcept { return last_; }
  double previous() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

/// M22 vanished (lasing threshold) or a layer has |n'| ~ 0.
class SingularError : public Error {
 public:
  using Error::Error;
};

}  // namespace kkscatter
