#include "curbflow/hybrid_sim.hpp"

#include <algorithm>
#include <cmath>

#include "curbflow/errors.hpp"

namespace curbflow {

double VehicleOutcome::position_at(double t) const {
    if (path_times.empty()) return 0.0;
    if (t <= path_times.front()) return path_positions.front();
    if (t >= path_times.back()) return path_positions.back();
    auto it = std::upper_bound(path_times.begin(), path_times.end(), t);
    const auto i = static_cast<std::size_t>(it - path_times.begin());
    const double w = (t - path_times[i - 1]) / (path_times[i] - path_times[i - 1]);
    return path_positions[i - 1] + w * (path_positions[i] - path_positions[i - 1]);
}

double SimulationResult::total_outflow() const {
    double s = 0.0;
    for (double q : q_out) s += q;
    return s;
}

std::optional<double> integrate_trajectory(const LaxHopfProblem& field, double depart_time,
                                           double start_x, double stop_position, double dt,
                                           VehicleOutcome* outcome) {
    double t = depart_time;
    double x = start_x;
    auto record = [&](double tt, double xx) {
        if (outcome) {
            outcome->path_times.push_back(tt);
            outcome->path_positions.push_back(xx);
        }
    };
    record(t, x);
    if (x >= stop_position) return t;
    while (t < field.horizon()) {
        const double step = std::min(dt, field.horizon() - t);
        const double v = field.fd().speed(field.density(t, x));
        const double x_next = std::min(x + v * step, field.length());
        if (x_next >= stop_position) {
            const double frac = v > 0.0 ? (stop_position - x) / (x_next - x) : 1.0;
            const double t_arr = t + frac * step;
            record(t_arr, stop_position);
            return t_arr;
        }
        t += step;
        x = x_next;
        record(t, x);
    }
    return std::nullopt;
}

double stop_passing_rate(const FundamentalDiagram& fd, int n_lanes) {
    if (n_lanes < 1) throw DomainError("stop_passing_rate: need at least one lane");
    return fd.q_m() * static_cast<double>(n_lanes - 1) / static_cast<double>(n_lanes);
}

ValueCondition make_stop_condition(const LaxHopfProblem& field, double arrival,
                                   double stop_position, double stop_duration, double rate) {
    const double t_end = std::min(arrival + stop_duration, field.horizon());
    const double anchor = field.value(arrival, stop_position);
    return ValueCondition::internal_stop(stop_position, arrival, t_end, rate, anchor);
}

namespace {

struct PendingVehicle {
    const StopVehicle* vehicle;
    double depart_time;
    double start_x;
};

// Rebuild the condition set: initial cells, placed stops, then the anchored
// boundary sweep over both profiles.
LaxHopfProblem assemble(const Scenario& sc, const std::vector<ValueCondition>& stops,
                        const BoundaryProfile& up, const BoundaryProfile& down) {
    LaxHopfProblem p(sc.fd, sc.length, sc.horizon);
    p.add_initial_cells(sc.initial_density);
    for (const auto& c : stops) p.add_condition(c);
    p.add_anchored_boundaries(up, down);
    return p;
}

}  // namespace

SimulationResult simulate(const Scenario& scenario) {
    const Scenario& sc = scenario;
    const BoundaryProfile up = sc.upstream_profile();
    const BoundaryProfile down = sc.downstream_profile();
    const double rate = stop_passing_rate(sc.fd, sc.n_lanes);

    std::vector<std::string> warnings;
    std::vector<PendingVehicle> pending;
    for (const auto& v : sc.vehicles) {
        if (!v.stop_position) {
            warnings.push_back("vehicle " + std::to_string(v.id) +
                               " has no stop position; skipped");
            continue;
        }
        if (v.approaching() && *v.entry_time >= sc.horizon) continue;
        pending.push_back({&v, v.approaching() ? *v.entry_time : 0.0,
                           v.approaching() ? 0.0 : *v.start_position});
    }

    std::vector<ValueCondition> placed_conditions;
    std::vector<VehicleOutcome> outcomes;
    LaxHopfProblem field = assemble(sc, placed_conditions, up, down);

    while (!pending.empty()) {
        // Estimate every pending arrival on the current field; earliest
        // arrival (ties by ascending id) is placed next. Vehicles that cannot
        // reach their stop are dropped with a warning (more conditions can
        // only delay them further).
        std::vector<PendingVehicle> reachable;
        int best_id = -1;
        double best_arrival = 0.0;
        VehicleOutcome best_outcome;
        for (const auto& pv : pending) {
            VehicleOutcome oc;
            oc.id = pv.vehicle->id;
            oc.stop_position = *pv.vehicle->stop_position;
            oc.stop_duration = pv.vehicle->stop_duration;
            auto arrival = integrate_trajectory(field, pv.depart_time, pv.start_x,
                                                oc.stop_position, 1.0, &oc);
            if (!arrival) {
                warnings.push_back("vehicle " + std::to_string(pv.vehicle->id) +
                                   " did not reach its stop before the horizon; stop dropped");
                oc.reached = false;
                outcomes.push_back(std::move(oc));
                continue;
            }
            reachable.push_back(pv);
            if (best_id < 0 || *arrival < best_arrival ||
                (*arrival == best_arrival && pv.vehicle->id < best_id)) {
                best_id = pv.vehicle->id;
                best_arrival = *arrival;
                oc.reached = true;
                oc.arrival = *arrival;
                best_outcome = std::move(oc);
            }
        }
        if (best_id < 0) break;

        placed_conditions.push_back(make_stop_condition(
            field, best_arrival, best_outcome.stop_position, best_outcome.stop_duration, rate));
        outcomes.push_back(std::move(best_outcome));
        std::erase_if(reachable, [&](const PendingVehicle& pv) { return pv.vehicle->id == best_id; });
        pending = std::move(reachable);
        field = assemble(sc, placed_conditions, up, down);
    }

    SimulationResult result{std::move(field), {}, {}, std::move(outcomes), std::move(warnings), 0};
    const int n = sc.steps();
    result.q_in.resize(static_cast<std::size_t>(n));
    result.q_out.resize(static_cast<std::size_t>(n));
    double m0_prev = 0.0;
    double mL_prev = result.problem.value(0.0, sc.length);
    for (int k = 1; k <= n; ++k) {
        const double tk = std::min(k * sc.dt, sc.horizon);
        const double m0 = result.problem.value(tk, 0.0);
        const double mL = result.problem.value(tk, sc.length);
        result.q_in[static_cast<std::size_t>(k - 1)] = m0 - m0_prev;
        result.q_out[static_cast<std::size_t>(k - 1)] = mL - mL_prev;
        m0_prev = m0;
        mL_prev = mL;
    }
    result.dominated_conditions =
        static_cast<int>(result.problem.compatibility_warnings(1e-6 * sc.fd.q_m() * sc.horizon)
                             .size());
    std::sort(result.vehicles.begin(), result.vehicles.end(),
              [](const VehicleOutcome& a, const VehicleOutcome& b) { return a.id < b.id; });
    return result;
}

SimulationResult simulate_with_positions(const Scenario& scenario,
                                         const std::vector<double>& approach_positions) {
    Scenario sc = scenario;
    std::size_t i = 0;
    for (auto& v : sc.vehicles) {
        if (!v.approaching()) continue;
        if (i >= approach_positions.size())
            throw DomainError("simulate_with_positions: fewer positions than approaching vehicles");
        v.stop_position = approach_positions[i++];
    }
    if (i != approach_positions.size())
        throw DomainError("simulate_with_positions: more positions than approaching vehicles");
    return simulate(sc);
}

}  // namespace curbflow
