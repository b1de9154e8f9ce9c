#pragma once

#include "slitflow/core.hpp"

namespace slitflow {

/// Sequential stream of wave functions on a fixed time lattice
/// t_k = start_time() + k * step_size(). Consumers read current() and call
/// advance() to move one step forward.
class FieldSource {
 public:
  virtual ~FieldSource() = default;

  virtual double step_size() const = 0;
  virtual double time() const = 0;
  virtual const ComplexField& current() const = 0;
  virtual void advance() = 0;
};

}  // namespace slitflow
