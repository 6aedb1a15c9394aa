#pragma once

#include "utb/finite_difference.hpp"
#include "utb/ode.hpp"

namespace utb {

struct NumericsSettings {
  double fd_step = fd::kDefaultCurveStep;
  int rk_steps = kRk4StepsPerUnit;  ///< RK4 steps per unit parameter
};

/// Installs `settings` for the lifetime of the scope. Not for concurrent use
/// with differing settings.
class NumericsScope {
 public:
  explicit NumericsScope(const NumericsSettings& settings)
      : saved_{fd::curve_step_base.load(), rk4_steps_per_unit.load()} {
    fd::curve_step_base.store(settings.fd_step);
    rk4_steps_per_unit.store(settings.rk_steps);
  }
  ~NumericsScope() {
    fd::curve_step_base.store(saved_.fd_step);
    rk4_steps_per_unit.store(saved_.rk_steps);
  }
  NumericsScope(const NumericsScope&) = delete;
  NumericsScope& operator=(const NumericsScope&) = delete;

 private:
  NumericsSettings saved_;
};

}  // namespace utb
