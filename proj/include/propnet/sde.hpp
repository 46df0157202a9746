#ifndef PROPNET_SDE_HPP
#define PROPNET_SDE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "propnet/network.hpp"

namespace propnet {

// Binary activation state, one 0/1 entry per node.
using StateVector = std::vector<std::uint8_t>;

StateVector initial_state(const PropagationNetwork& net, const SourceSet& sources);

// Per-bin increments of the driving Poisson processes. recovery has length
// n, activation length m (canonical edge order).
struct JumpIncrements {
    std::vector<std::uint32_t> recovery;
    std::vector<std::uint32_t> activation;
};

// Activation coefficient rows b_j: one entry per edge (canonical order),
// value (1 - X_target) * X_source. Together with the diagonal -X these are
// the full jump coefficients of the state system.
std::vector<std::uint8_t> coeff_b(const PropagationNetwork& net, const StateVector& x);

enum class Stepper { Euler, Taylor2, JumpAdapted };

std::string stepper_name(Stepper s);

// Weak-order-1 step: X + c(X) dJ, componentwise clamped back to {0,1}.
// The clamp only engages when a bin carries two or more relevant jumps.
StateVector euler_step(const PropagationNetwork& net, const StateVector& x,
                       const JumpIncrements& dj);

// Weak-order-2 step: Euler predictor X_mid, then
//   X + c(X) dJ + (1/2) (c(X_mid) - c(X)) * dJ(dJ - 1)
// with the products taken componentwise, clamped to {0,1}. Equals the Euler
// step whenever every increment is 0 or 1.
StateVector taylor2_step(const PropagationNetwork& net, const StateVector& x,
                         const JumpIncrements& dj);

struct GridTrajectory {
    double step = 0.0;
    std::vector<double> times;        // t_0 .. t_K
    std::vector<StateVector> states;  // K+1 entries
};

// Iterates the chosen grid stepper over the schedule (one JumpIncrements
// per bin) and records the state at every grid point.
GridTrajectory simulate_trajectory(const PropagationNetwork& net, const SourceSet& sources,
                                   std::span<const JumpIncrements> schedule, Stepper stepper,
                                   double step);

// Jump process id: [0,n) recovery of node, [n,n+m) activation edge.
struct Event {
    double time = 0.0;
    int process = 0;
};

// Deterministic event order: by time; ties broken by process id, which puts
// recoveries before activations and then sorts by edge index.
inline bool event_order_less(const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.process < b.process;
}

struct EventList {
    double horizon = 0.0;
    std::vector<Event> events; // sorted by event_order_less
};

// Piecewise-constant cadlag path: per-node activation toggle times plus the
// elapsed-activation clock U derived from them. Queryable at any t in
// [0, horizon].
class EventTrajectory {
public:
    EventTrajectory() = default;
    EventTrajectory(const PropagationNetwork& net, const SourceSet& sources, double horizon);

    // Appends a state flip of `node` at `time`; times must be nondecreasing
    // per node and the flip must alternate with the node's current state.
    void apply_toggle(int node, double time, bool active);

    int node_count() const { return static_cast<int>(initial_.size()); }
    double horizon() const { return horizon_; }
    const StateVector& initial() const { return initial_; }

    bool node_active_at(int node, double t) const;
    StateVector state_at(double t) const;
    int active_count_at(double t) const;

    // Time since the node's last activation; 0 whenever the node is
    // inactive. Source nodes count from t = 0.
    double elapsed_active_at(int node, double t) const;

    std::optional<double> first_activation(int node) const;
    std::span<const double> toggle_times(int node) const {
        return toggles_[static_cast<std::size_t>(node)];
    }

private:
    double horizon_ = 0.0;
    StateVector initial_;
    std::vector<std::vector<double>> toggles_; // alternating flips per node
};

// Exact event replay: an activation event on edge (i,j) flips j on only if
// i is active and j inactive; a recovery event on i flips i off only if i
// is active. Throws on an unsorted event list.
EventTrajectory jump_adapted_replay(const PropagationNetwork& net, const SourceSet& sources,
                                    const EventList& events);

} // namespace propnet

#endif
