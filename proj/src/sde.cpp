#include "propnet/sde.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace propnet {

StateVector initial_state(const PropagationNetwork& net, const SourceSet& sources) {
    StateVector x(static_cast<std::size_t>(net.node_count()), 0);
    for (int v : sources.nodes) x[static_cast<std::size_t>(v)] = 1;
    return x;
}

std::string stepper_name(Stepper s) {
    switch (s) {
    case Stepper::Euler: return "euler";
    case Stepper::Taylor2: return "taylor2";
    case Stepper::JumpAdapted: return "jump-adapted";
    }
    return "?";
}

std::vector<std::uint8_t> coeff_b(const PropagationNetwork& net, const StateVector& x) {
    std::vector<std::uint8_t> b(static_cast<std::size_t>(net.edge_count()), 0);
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        b[static_cast<std::size_t>(e)] = static_cast<std::uint8_t>(
            (1 - x[static_cast<std::size_t>(ed.target)]) * x[static_cast<std::size_t>(ed.source)]);
    }
    return b;
}

namespace {

void check_dims(const PropagationNetwork& net, const StateVector& x, const JumpIncrements& dj) {
    if (static_cast<int>(x.size()) != net.node_count() ||
        static_cast<int>(dj.recovery.size()) != net.node_count() ||
        static_cast<int>(dj.activation.size()) != net.edge_count())
        throw std::invalid_argument("stepper: dimension mismatch");
}

std::uint8_t clamp01(long v) { return v <= 0 ? 0 : 1; }

} // namespace

StateVector euler_step(const PropagationNetwork& net, const StateVector& x,
                       const JumpIncrements& dj) {
    check_dims(net, x, dj);
    StateVector out(x);
    for (int j = 0; j < net.node_count(); ++j) {
        long raw = x[static_cast<std::size_t>(j)];
        raw -= static_cast<long>(x[static_cast<std::size_t>(j)]) *
               dj.recovery[static_cast<std::size_t>(j)];
        if (!x[static_cast<std::size_t>(j)]) {
            for (const auto& link : net.parents(j))
                raw += static_cast<long>(x[static_cast<std::size_t>(link.node)]) *
                       dj.activation[static_cast<std::size_t>(link.edge)];
        }
        out[static_cast<std::size_t>(j)] = clamp01(raw);
    }
    return out;
}

StateVector taylor2_step(const PropagationNetwork& net, const StateVector& x,
                         const JumpIncrements& dj) {
    check_dims(net, x, dj);
    const StateVector mid = euler_step(net, x, dj);
    StateVector out(x);
    for (int j = 0; j < net.node_count(); ++j) {
        const long xj = x[static_cast<std::size_t>(j)];
        long raw = xj;
        // linear term c(X) dJ, unclamped
        raw -= xj * dj.recovery[static_cast<std::size_t>(j)];
        for (const auto& link : net.parents(j))
            raw += (1 - xj) * static_cast<long>(x[static_cast<std::size_t>(link.node)]) *
                   dj.activation[static_cast<std::size_t>(link.edge)];
        // correction (1/2)(c(X_mid) - c(X)) dJ(dJ - 1); dJ(dJ-1) is even, so
        // every contribution is an integer
        const std::uint32_t dr = dj.recovery[static_cast<std::size_t>(j)];
        if (dr >= 2) {
            long w = static_cast<long>(dr) * (static_cast<long>(dr) - 1);
            raw += -(static_cast<long>(mid[static_cast<std::size_t>(j)]) - xj) * w / 2;
        }
        for (const auto& link : net.parents(j)) {
            const std::uint32_t dn = dj.activation[static_cast<std::size_t>(link.edge)];
            if (dn < 2) continue;
            long w = static_cast<long>(dn) * (static_cast<long>(dn) - 1);
            long db = (1 - static_cast<long>(mid[static_cast<std::size_t>(j)])) *
                          mid[static_cast<std::size_t>(link.node)] -
                      (1 - xj) * static_cast<long>(x[static_cast<std::size_t>(link.node)]);
            raw += db * w / 2;
        }
        out[static_cast<std::size_t>(j)] = clamp01(raw);
    }
    return out;
}

GridTrajectory simulate_trajectory(const PropagationNetwork& net, const SourceSet& sources,
                                   std::span<const JumpIncrements> schedule, Stepper stepper,
                                   double step) {
    if (stepper == Stepper::JumpAdapted)
        throw std::invalid_argument("simulate_trajectory: schedule-driven steppers only");
    if (!(step > 0.0)) throw std::invalid_argument("simulate_trajectory: step must be positive");
    GridTrajectory traj;
    traj.step = step;
    traj.times.reserve(schedule.size() + 1);
    traj.states.reserve(schedule.size() + 1);
    StateVector x = initial_state(net, sources);
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        x = stepper == Stepper::Euler ? euler_step(net, x, schedule[k])
                                      : taylor2_step(net, x, schedule[k]);
        traj.times.push_back(static_cast<double>(k + 1) * step);
        traj.states.push_back(x);
    }
    return traj;
}

EventTrajectory::EventTrajectory(const PropagationNetwork& net, const SourceSet& sources,
                                 double horizon)
    : horizon_(horizon), initial_(initial_state(net, sources)),
      toggles_(static_cast<std::size_t>(net.node_count())) {}

void EventTrajectory::apply_toggle(int node, double time, bool active) {
    auto& ts = toggles_[static_cast<std::size_t>(node)];
    const bool current = (initial_[static_cast<std::size_t>(node)] + ts.size()) % 2 == 1;
    if (current == active) throw std::logic_error("trajectory: toggle does not flip the state");
    if (!ts.empty() && time < ts.back())
        throw std::logic_error("trajectory: toggle times must be nondecreasing");
    ts.push_back(time);
}

bool EventTrajectory::node_active_at(int node, double t) const {
    const auto& ts = toggles_[static_cast<std::size_t>(node)];
    const auto flips = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
    return (initial_[static_cast<std::size_t>(node)] + flips) % 2 == 1;
}

StateVector EventTrajectory::state_at(double t) const {
    StateVector x(initial_.size());
    for (int i = 0; i < node_count(); ++i)
        x[static_cast<std::size_t>(i)] = node_active_at(i, t) ? 1 : 0;
    return x;
}

int EventTrajectory::active_count_at(double t) const {
    int count = 0;
    for (int i = 0; i < node_count(); ++i) count += node_active_at(i, t) ? 1 : 0;
    return count;
}

double EventTrajectory::elapsed_active_at(int node, double t) const {
    const auto& ts = toggles_[static_cast<std::size_t>(node)];
    const auto flips = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
    const bool active = (initial_[static_cast<std::size_t>(node)] + flips) % 2 == 1;
    if (!active) return 0.0;
    // active: the last toggle (if any) was the activation
    return flips == 0 ? t : t - ts[static_cast<std::size_t>(flips - 1)];
}

std::optional<double> EventTrajectory::first_activation(int node) const {
    if (initial_[static_cast<std::size_t>(node)]) return 0.0;
    const auto& ts = toggles_[static_cast<std::size_t>(node)];
    if (ts.empty()) return std::nullopt;
    return ts.front();
}

EventTrajectory jump_adapted_replay(const PropagationNetwork& net, const SourceSet& sources,
                                    const EventList& events) {
    for (std::size_t k = 1; k < events.events.size(); ++k)
        if (event_order_less(events.events[k], events.events[k - 1]))
            throw std::invalid_argument("replay: event list not sorted");
    EventTrajectory traj(net, sources, events.horizon);
    StateVector x = initial_state(net, sources);
    const int n = net.node_count();
    for (const Event& ev : events.events) {
        if (ev.time > events.horizon) break;
        if (ev.process < 0 || ev.process >= net.process_count())
            throw std::invalid_argument("replay: process id out of range");
        if (ev.process < n) {
            const int i = ev.process;
            if (x[static_cast<std::size_t>(i)]) {
                x[static_cast<std::size_t>(i)] = 0;
                traj.apply_toggle(i, ev.time, false);
            }
        } else {
            const Edge& ed = net.edge(ev.process - n);
            if (x[static_cast<std::size_t>(ed.source)] && !x[static_cast<std::size_t>(ed.target)]) {
                x[static_cast<std::size_t>(ed.target)] = 1;
                traj.apply_toggle(ed.target, ev.time, true);
            }
        }
    }
    return traj;
}

} // namespace propnet
