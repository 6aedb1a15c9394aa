#pragma once

#include "utb/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace utb {

/// Minimum number of fixed RK4 steps per unit of parameter.
inline constexpr int kRk4StepsPerUnit = 2000;

inline std::atomic<int> rk4_steps_per_unit{kRk4StepsPerUnit};

inline int rk4_steps_for(double span) {
  const int per_unit = rk4_steps_per_unit.load(std::memory_order_relaxed);
  return std::max(16, static_cast<int>(std::ceil(std::abs(span) * per_unit)));
}

template <int N>
using OdeState = Eigen::Matrix<double, N, 1>;

template <int N>
using OdeRhs = std::function<OdeState<N>(double, const OdeState<N>&)>;

template <int N>
OdeState<N> rk4_step(const OdeRhs<N>& rhs, double t, const OdeState<N>& y, double h) {
  const OdeState<N> k1 = rhs(t, y);
  const OdeState<N> k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
  const OdeState<N> k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
  const OdeState<N> k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step RK4 from t0 to t1.
template <int N>
OdeState<N> rk4_integrate(const OdeRhs<N>& rhs, double t0, OdeState<N> y, double t1,
                          int steps) {
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    y = rk4_step<N>(rhs, t0 + i * h, y, h);
    if (!y.allFinite()) {
      fail(ErrorKind::IntegrationFailure, "non-finite state at t=" + std::to_string(t0 + i * h));
    }
  }
  return y;
}

/// RK4 solution stored at fixed nodes. Evaluation between nodes integrates
/// from the nearest node with two sub-steps, so the result is a smooth
/// function of t inside each half cell and continuous to RK4 local error
/// across cells. This keeps finite differences of the trajectory clean.
template <int N>
class DenseTrajectory {
 public:
  using State = OdeState<N>;

  DenseTrajectory(OdeRhs<N> rhs, double t0, const State& y0, double t1, int steps) {
    if (!(t1 > t0) || steps < 1) {
      fail(ErrorKind::IntegrationFailure, "empty integration interval");
    }
    auto d = std::make_shared<Data>();
    d->rhs = std::move(rhs);
    d->t0 = t0;
    d->t1 = t1;
    d->h = (t1 - t0) / steps;
    d->nodes.reserve(steps + 1);
    d->nodes.push_back(y0);
    State y = y0;
    for (int i = 0; i < steps; ++i) {
      y = rk4_step<N>(d->rhs, t0 + i * d->h, y, d->h);
      if (!y.allFinite()) {
        fail(ErrorKind::IntegrationFailure,
             "non-finite state at t=" + std::to_string(t0 + (i + 1) * d->h));
      }
      d->nodes.push_back(y);
    }
    data_ = std::move(d);
  }

  double t0() const { return data_->t0; }
  double t1() const { return data_->t1; }
  int steps() const { return static_cast<int>(data_->nodes.size()) - 1; }
  const State& node(int i) const { return data_->nodes[i]; }
  double node_time(int i) const { return data_->t0 + i * data_->h; }

  State at(double t) const {
    const Data& d = *data_;
    const double tol = 1e-12 * std::max(1.0, std::abs(d.t1 - d.t0));
    if (t < d.t0 - tol || t > d.t1 + tol) {
      fail(ErrorKind::DomainBoundary, "trajectory evaluated at t=" + std::to_string(t) +
                                          " outside [" + std::to_string(d.t0) + ", " +
                                          std::to_string(d.t1) + "]");
    }
    const int last = steps();
    int k = static_cast<int>(std::lround((t - d.t0) / d.h));
    k = std::clamp(k, 0, last);
    const double tk = node_time(k);
    const double dt = t - tk;
    if (dt == 0.0) return d.nodes[k];
    State y = d.nodes[k];
    y = rk4_step<N>(d.rhs, tk, y, 0.5 * dt);
    y = rk4_step<N>(d.rhs, tk + 0.5 * dt, y, 0.5 * dt);
    return y;
  }

  State derivative(double t) const { return data_->rhs(t, at(t)); }

  const OdeRhs<N>& rhs() const { return data_->rhs; }

 private:
  struct Data {
    OdeRhs<N> rhs;
    double t0 = 0, t1 = 0, h = 0;
    std::vector<State> nodes;
  };
  std::shared_ptr<const Data> data_;
};

}  // namespace utb
