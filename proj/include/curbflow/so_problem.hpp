#ifndef CURBFLOW_SO_PROBLEM_HPP
#define CURBFLOW_SO_PROBLEM_HPP

#include <string>
#include <vector>

#include "curbflow/scenario.hpp"

namespace curbflow {

/// A stop-position assignment with its simulated objective value,
/// f = -outflow_sum + spillback_penalty + detour_penalty (all in vehicles;
/// spillback_penalty already carries w_SB).
struct ControlSolution {
    std::vector<double> positions;
    double objective = 0.0;
    double outflow_sum = 0.0;
    double spillback_penalty = 0.0;
    double detour_penalty = 0.0;
    bool timed_out = false;
    bool heuristic = false;

    std::string csv_row() const;
};

/// Candidate stop positions: multiples of v_f inside the open stability
/// interval (w_c*dt, L - v_f*dt). Throws ConfigError when empty.
std::vector<double> candidate_grid(const Scenario& scenario);

/// Grid for one approaching vehicle (0-based among approaching vehicles),
/// additionally intersected with its detour box when X_US/X_DS are set.
std::vector<double> candidate_grid_for(const Scenario& scenario, std::size_t vehicle_index);

/// Throws FeasibilityError naming the violated constraint.
void check_feasible(const Scenario& scenario, const std::vector<double>& positions);

/// Simulation-backed objective: runs the hybrid simulation with the given
/// stop positions for the approaching vehicles and assembles the objective
/// decomposition. Pure: identical inputs give bit-identical results.
ControlSolution evaluate(const std::vector<double>& positions, const Scenario& scenario);

/// Detour term alone (no simulation).
double detour_penalty(const std::vector<double>& positions, const Scenario& scenario);

}  // namespace curbflow

#endif
