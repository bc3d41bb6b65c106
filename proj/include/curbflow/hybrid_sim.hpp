#ifndef CURBFLOW_HYBRID_SIM_HPP
#define CURBFLOW_HYBRID_SIM_HPP

#include <optional>
#include <string>
#include <vector>

#include "curbflow/lax_hopf.hpp"
#include "curbflow/scenario.hpp"

namespace curbflow {

struct VehicleOutcome {
    int id = 0;
    double stop_position = 0.0;
    double stop_duration = 0.0;
    bool reached = false;
    double arrival = 0.0;  // s, only when reached
    // Sampled path (one point per trajectory step) up to the arrival; used by
    // the controller to place still-driving vehicles in prediction windows.
    std::vector<double> path_times;
    std::vector<double> path_positions;

    double position_at(double t) const;
};

struct SimulationResult {
    LaxHopfProblem problem;        // final condition set; exact M everywhere
    std::vector<double> q_in;      // veh per objective step
    std::vector<double> q_out;     // veh per objective step
    std::vector<VehicleOutcome> vehicles;
    std::vector<std::string> warnings;
    int dominated_conditions = 0;  // compatibility summary

    double total_outflow() const;
};

/// Crossing time of `stop_position` by forward-Euler integration of
/// dx = speed(rho(t,x)) dt through the given field, starting from
/// (depart_time, start_x). Returns nullopt if the position is not reached
/// before the horizon. `outcome`, when given, receives the sampled path.
std::optional<double> integrate_trajectory(const LaxHopfProblem& field, double depart_time,
                                           double start_x, double stop_position,
                                           double dt = 1.0, VehicleOutcome* outcome = nullptr);

/// Passing rate of a lane-blocking stop: capacity of the remaining lanes.
double stop_passing_rate(const FundamentalDiagram& fd, int n_lanes);

/// Internal condition for a stop that activates at `arrival`: anchored at the
/// count realized at (arrival, stop_position), growing at the passing rate,
/// truncated at the horizon.
ValueCondition make_stop_condition(const LaxHopfProblem& field, double arrival,
                                   double stop_position, double stop_duration, double rate);

/// Chronological hybrid simulation: vehicles are placed in order of their
/// (re-estimated) arrival times, each placement re-anchors the boundary
/// conditions, and the macroscopic field is always the exact Lax-Hopf
/// solution of the conditions fixed so far. Deterministic.
///
/// Approaching vehicles without a stop_position are ignored with a warning
/// (callers normally assign positions first).
SimulationResult simulate(const Scenario& scenario);

/// Convenience: same, with stop positions for the approaching vehicles (in
/// scenario declaration order) substituted before simulating.
SimulationResult simulate_with_positions(const Scenario& scenario,
                                         const std::vector<double>& approach_positions);

}  // namespace curbflow

#endif
