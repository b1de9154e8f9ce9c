#pragma once

#include <stdexcept>
#include <string>

namespace slitflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A grid axis has fewer points than the boundary stencils require.
class GridTooSmall : public Error {
 public:
  using Error::Error;
};

/// A velocity or quantum potential was requested where the density vanishes.
class NodeError : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

/// The normal-equation matrix of a least-squares fit is numerically singular.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Norm conservation was violated beyond tolerance during propagation.
class NormDrift : public Error {
 public:
  NormDrift(const std::string& what, double time, double drift)
      : Error(what), time_(time), drift_(drift) {}
  double time() const noexcept { return time_; }
  double drift() const noexcept { return drift_; }

 private:
  double time_;
  double drift_;
};

/// A trajectory ran into a region where the velocity field is masked.
class MaskedRegion : public Error {
 public:
  MaskedRegion(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line) : Error(what), line_(line) {}
  /// 1-based line number, or 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace slitflow
