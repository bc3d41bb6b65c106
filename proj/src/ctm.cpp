#include "curbflow/ctm.hpp"

#include <algorithm>
#include <cmath>

#include "curbflow/errors.hpp"
#include "curbflow/hybrid_sim.hpp"

namespace curbflow {

std::pair<double, double> ctm_step(CtmGrid& grid, const FundamentalDiagram& fd, double demand_in,
                                   double supply_out) {
    const auto n = grid.density.size();
    if (n == 0 || grid.capacity.size() != n) throw ConfigError("ctm_step: empty or mismatched grid");
    if (grid.step > grid.cell_length / fd.v_f() + 1e-12)
        throw ConfigError("ctm_step: step violates the stability bound dx/v_f");

    auto sending = [&](std::size_t i) {
        return std::min(fd.demand(grid.density[i]), grid.capacity[i]);
    };
    auto receiving = [&](std::size_t i) {
        return std::min(fd.supply(grid.density[i]), grid.capacity[i]);
    };

    std::vector<double> flux(n + 1, 0.0);  // flux[i] enters cell i
    flux[0] = std::min(demand_in, receiving(0));
    for (std::size_t i = 1; i < n; ++i) flux[i] = std::min(sending(i - 1), receiving(i));
    flux[n] = std::min(sending(n - 1), supply_out);

    for (std::size_t i = 0; i < n; ++i)
        grid.density[i] += grid.step / grid.cell_length * (flux[i] - flux[i + 1]);
    return {flux[0] * grid.step, flux[n] * grid.step};
}

namespace {

struct CtmVehicle {
    double depart_time;
    double start_x;
    double stop_position;
    double stop_duration;
    double x;
    bool stopped = false;
    double arrival = -1.0;
    std::size_t stop_cell = 0;
};

}  // namespace

CtmResult ctm_simulate(const Scenario& scenario, double sample_dt) {
    const Scenario& sc = scenario;
    const int n_cells = std::max(1, static_cast<int>(std::lround(sc.length / 7.0)));
    CtmGrid grid;
    grid.cell_length = sc.length / n_cells;
    grid.step = 0.5;
    grid.density.resize(static_cast<std::size_t>(n_cells));
    grid.capacity.assign(static_cast<std::size_t>(n_cells), sc.fd.q_m());

    // Initial densities: length-weighted resampling of the scenario cells.
    const double src_dx = sc.length / static_cast<double>(sc.initial_density.size());
    for (int i = 0; i < n_cells; ++i) {
        const double a = i * grid.cell_length;
        const double b = a + grid.cell_length;
        double mass = 0.0;
        for (std::size_t s = 0; s < sc.initial_density.size(); ++s) {
            const double sa = s * src_dx, sb = sa + src_dx;
            const double overlap = std::max(0.0, std::min(b, sb) - std::max(a, sa));
            mass += overlap * sc.initial_density[s];
        }
        grid.density[static_cast<std::size_t>(i)] = mass / grid.cell_length;
    }

    const double rate = stop_passing_rate(sc.fd, sc.n_lanes);
    std::vector<CtmVehicle> vehicles;
    for (const auto& v : sc.vehicles) {
        if (!v.stop_position) continue;
        CtmVehicle cv;
        cv.depart_time = v.approaching() ? *v.entry_time : 0.0;
        cv.start_x = v.approaching() ? 0.0 : *v.start_position;
        cv.stop_position = *v.stop_position;
        cv.stop_duration = v.stop_duration;
        cv.x = cv.start_x;
        vehicles.push_back(cv);
    }

    CtmResult out;
    out.cell_length = grid.cell_length;
    out.step = grid.step;
    for (double r : grid.density) out.stored_initial += r * grid.cell_length;

    const auto total_steps = static_cast<int>(std::llround(sc.horizon / grid.step));
    const auto sample_every = std::max(1, static_cast<int>(std::llround(sample_dt / grid.step)));
    const auto obj_every = static_cast<int>(std::llround(sc.dt / grid.step));
    out.q_in.assign(static_cast<std::size_t>(sc.steps()), 0.0);
    out.q_out.assign(static_cast<std::size_t>(sc.steps()), 0.0);

    out.times.push_back(0.0);
    out.density.push_back(grid.density);

    for (int step = 0; step < total_steps; ++step) {
        const double t = step * grid.step;
        const int k = std::min(static_cast<int>(t / sc.dt), sc.steps() - 1);

        // Advance vehicles against the current field, then refresh caps.
        for (auto& v : vehicles) {
            if (v.arrival >= 0.0) continue;  // already at its stop
            if (t < v.depart_time) continue;
            const auto cell = std::min<std::size_t>(
                static_cast<std::size_t>(v.x / grid.cell_length), grid.density.size() - 1);
            const double speed = sc.fd.speed(grid.density[cell]);
            v.x = std::min(v.x + speed * grid.step, sc.length);
            if (v.x >= v.stop_position) {
                v.arrival = t + grid.step;
                v.stopped = true;
                v.stop_cell = std::min<std::size_t>(
                    static_cast<std::size_t>(v.stop_position / grid.cell_length),
                    grid.density.size() - 1);
            }
        }
        std::fill(grid.capacity.begin(), grid.capacity.end(), sc.fd.q_m());
        for (const auto& v : vehicles) {
            if (!v.stopped || v.arrival < 0.0) continue;
            const double t_next = t + grid.step;
            if (t_next > v.arrival - 1e-12 && t_next <= v.arrival + v.stop_duration + 1e-12)
                grid.capacity[v.stop_cell] = std::min(grid.capacity[v.stop_cell], rate);
        }

        const double supply_out = sc.signal.is_red(t) ? 0.0 : sc.supply_at(k);
        auto [fin, fout] = ctm_step(grid, sc.fd, sc.demand_at(k), supply_out);
        out.total_in += fin;
        out.total_out += fout;
        const auto kk = static_cast<std::size_t>(std::min(step / obj_every, sc.steps() - 1));
        out.q_in[kk] += fin;
        out.q_out[kk] += fout;

        if ((step + 1) % sample_every == 0) {
            out.times.push_back((step + 1) * grid.step);
            out.density.push_back(grid.density);
        }
    }
    for (double r : grid.density) out.stored_final += r * grid.cell_length;
    for (const auto& v : vehicles) out.arrivals.push_back(v.arrival);
    return out;
}

}  // namespace curbflow
