#pragma once

namespace ringsqueeze {

/// Where inside a step the right-hand side is being evaluated. Inputs that
/// are only known on a sampled grid are looked up by stage rather than by
/// time.
enum class Stage { kStart, kMid, kEnd };

/// One classical fourth-order Runge-Kutta step. `rhs(stage, y)` returns dy/dt.
template <class State, class Rhs>
State rk4_step(const State& y, double h, Rhs&& rhs) {
  const State k1 = rhs(Stage::kStart, y);
  const State k2 = rhs(Stage::kMid, State(y + (0.5 * h) * k1));
  const State k3 = rhs(Stage::kMid, State(y + (0.5 * h) * k2));
  const State k4 = rhs(Stage::kEnd, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace ringsqueeze
