#pragma once

// Core domain types for the normalized quantum-piston control problem.
//
// Internal unit conventions: times in units of T0 = sqrt(m/k0), lengths in
// units of the initial box width a0, stiffness as u = k/k0 in [-1, 1].
// Conversion to physical units happens only at the CLI boundary.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpiston {

/// Phase-plane vector (x1, x2) of the normalized piston model:
/// x1 = a(t)/a0 (scaled wall position), x2 = scaled wall velocity.
template <typename Scalar>
using PhaseVec = Eigen::Matrix<Scalar, 2, 1>;

using State = PhaseVec<double>;

/// State-space constraint of the expansion problem: the wall position must
/// stay strictly positive. Touching x1 = 0 counts as a breach.
inline bool state_admissible(const State& x) { return x(0) > 0.0; }

/// One constant-control piece: u is held at `value` for `duration` time units.
struct Segment {
  double duration = 0.0;
  double value = 0.0;
};

/// Piecewise-constant control u(t) in [-1, 1].
///
/// Boundary jumps u(0)=u(T)=0 are represented as metadata, not segments:
/// they take zero time and zero cost, so the schedule stores only the
/// interior bang values.
class ControlSchedule {
 public:
  ControlSchedule() = default;

  explicit ControlSchedule(std::vector<Segment> segments, bool boundary_jumps = true)
      : boundary_jumps_(boundary_jumps) {
    for (const auto& s : segments) append(s.duration, s.value);
  }

  void append(double duration, double value) {
    if (!(duration >= 0.0) || !std::isfinite(duration))
      throw std::invalid_argument("ControlSchedule: segment duration must be >= 0");
    if (!(std::abs(value) <= 1.0))
      throw std::invalid_argument("ControlSchedule: control value must lie in [-1, 1]");
    segments_.push_back({duration, value});
  }

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }
  bool boundary_jumps() const { return boundary_jumps_; }

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }

  /// Control value at time t (right-continuous; clamps to the horizon ends).
  double control_at(double t) const {
    if (segments_.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& s : segments_) {
      acc += s.duration;
      if (t < acc) return s.value;
    }
    return segments_.back().value;
  }

  /// Times of the interior control switches (segment boundaries where the
  /// value actually changes). Zero-duration segments do not produce switches.
  std::vector<double> switch_times() const {
    std::vector<double> times;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
      acc += segments_[i].duration;
      if (segments_[i].value != segments_[i + 1].value && acc > 0.0 &&
          acc < total_duration())
        times.push_back(acc);
    }
    return times;
  }

 private:
  std::vector<Segment> segments_;
  bool boundary_jumps_ = true;
};

struct TrajectorySample {
  double t = 0.0;
  State x = State::Zero();
  double u = 0.0;
};

/// Sampled controlled trajectory. If the state constraint x1 > 0 was
/// violated, `breached` is set and `samples` holds the partial path up to
/// (and including) the breach point; no exception is thrown so infeasible
/// schedules can still be probed.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool breached = false;
  double breach_time = std::numeric_limits<double>::quiet_NaN();

  const State& final_state() const {
    if (samples.empty()) throw std::logic_error("Trajectory: empty");
    return samples.back().x;
  }
  double final_time() const {
    if (samples.empty()) throw std::logic_error("Trajectory: empty");
    return samples.back().t;
  }
};

enum class PlanMethod { Optimal, Inverse, Custom };

inline const char* to_string(PlanMethod m) {
  switch (m) {
    case PlanMethod::Optimal: return "optimal";
    case PlanMethod::Inverse: return "inverse";
    case PlanMethod::Custom: return "custom";
  }
  return "custom";
}

/// A planned expansion from (1, 0) toward (gamma, 0) over [0, duration].
///
/// `schedule` carries the piecewise-constant description when one exists
/// (bang-bang plans); continuous plans (inverse engineering, ramped bangs)
/// leave it empty and are fully described by the `control`/`state` callables.
struct ExpansionPlan {
  double gamma = 1.0;
  double duration = 0.0;
  PlanMethod method = PlanMethod::Custom;
  ControlSchedule schedule;
  std::vector<State> switch_states;
  std::function<double(double)> control;  // u(t)
  std::function<State(double)> state;     // (x1, x2)(t)

  double wall(double t) const { return state(t)(0); }
  double wall_rate(double t) const { return state(t)(1); }
  // From the state equations, the scaled wall acceleration is -u * x1.
  double wall_accel(double t) const { return -control(t) * state(t)(0); }
};

}  // namespace qpiston
