#include "curbflow/so_problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "curbflow/errors.hpp"
#include "curbflow/hybrid_sim.hpp"

namespace curbflow {

std::string ControlSolution::csv_row() const {
    std::string row;
    char buf[64];
    for (double x : positions) {
        std::snprintf(buf, sizeof buf, "%.9g;", x);
        row += buf;
    }
    if (!row.empty()) row.pop_back();
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g,%.9g", objective, outflow_sum,
                  spillback_penalty, detour_penalty);
    row += buf;
    return row;
}

std::vector<double> candidate_grid(const Scenario& sc) {
    const double lo = sc.fd.w_c() * sc.dt;
    const double hi = sc.length - sc.fd.v_f() * sc.dt;
    std::vector<double> grid;
    for (double x = sc.fd.v_f(); x < sc.length; x += sc.fd.v_f())
        if (x > lo && x < hi) grid.push_back(x);
    if (grid.empty())
        throw ConfigError("candidate grid is empty: stability interval (" + std::to_string(lo) +
                          ", " + std::to_string(hi) + ") holds no multiple of v_f");
    return grid;
}

std::vector<double> candidate_grid_for(const Scenario& sc, std::size_t vehicle_index) {
    std::vector<double> grid = candidate_grid(sc);
    const auto& w = sc.weights;
    if (!w.x_d.empty() && !w.x_us.empty() && !w.x_ds.empty()) {
        if (vehicle_index >= w.x_d.size())
            throw DomainError("candidate_grid_for: vehicle index out of range");
        const double lo = w.x_d[vehicle_index] - w.x_us[vehicle_index];
        const double hi = w.x_d[vehicle_index] + w.x_ds[vehicle_index];
        std::erase_if(grid, [&](double x) { return x < lo || x > hi; });
        if (grid.empty())
            throw ConfigError("candidate grid for vehicle " + std::to_string(vehicle_index) +
                              " is empty after the detour box");
    }
    return grid;
}

void check_feasible(const Scenario& sc, const std::vector<double>& positions) {
    const auto approaching = sc.approaching_vehicles();
    if (positions.size() != approaching.size())
        throw FeasibilityError("expected " + std::to_string(approaching.size()) +
                               " stop positions, got " + std::to_string(positions.size()));
    const double lo = sc.fd.w_c() * sc.dt;
    const double hi = sc.length - sc.fd.v_f() * sc.dt;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const double x = positions[i];
        if (!(x > lo && x < hi))
            throw FeasibilityError("x[" + std::to_string(i) + "]=" + std::to_string(x) +
                                   " outside the stability interval (" + std::to_string(lo) +
                                   ", " + std::to_string(hi) + ")");
        const auto& w = sc.weights;
        if (!w.x_d.empty() && !w.x_us.empty() && !w.x_ds.empty()) {
            if (x < w.x_d[i] - w.x_us[i] - 1e-9 || x > w.x_d[i] + w.x_ds[i] + 1e-9)
                throw FeasibilityError("x[" + std::to_string(i) + "]=" + std::to_string(x) +
                                       " outside the detour box [X_D-X_US, X_D+X_DS]");
        }
    }
}

double detour_penalty(const std::vector<double>& positions, const Scenario& sc) {
    const auto& w = sc.weights;
    if (w.w_d.empty() || w.x_d.empty()) return 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        p += w.w_d[i] * std::abs(w.x_d[i] - positions[i]);
    return p;
}

ControlSolution evaluate(const std::vector<double>& positions, const Scenario& sc) {
    check_feasible(sc, positions);
    const SimulationResult sim = simulate_with_positions(sc, positions);

    ControlSolution sol;
    sol.positions = positions;
    double spill = 0.0;
    for (int k = 0; k < sc.steps(); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        sol.outflow_sum += sim.q_out[idx];
        const double blocked = sc.demand_at(k) * sc.dt - sim.q_in[idx];
        // The anchored inflow never exceeds demand, so each term is a
        // nonnegative count of vehicles turned away in that step.
        spill += std::max(blocked, 0.0);
    }
    sol.spillback_penalty = sc.weights.w_sb * spill;
    sol.detour_penalty = detour_penalty(positions, sc);
    sol.objective = -sol.outflow_sum + sol.spillback_penalty + sol.detour_penalty;
    return sol;
}

}  // namespace curbflow
