#ifndef CURBFLOW_CTM_HPP
#define CURBFLOW_CTM_HPP

#include <vector>

#include "curbflow/fundamental_diagram.hpp"
#include "curbflow/scenario.hpp"

namespace curbflow {

/// Godunov / cell-transmission state. Deliberately simple and independent of
/// the variational solver: it exists to cross-check, not to be fast.
struct CtmGrid {
    double cell_length = 7.0;  // m
    double step = 0.5;         // s
    std::vector<double> density;   // veh/m per cell
    std::vector<double> capacity;  // veh/s per cell (lowered inside an active bottleneck)
};

/// One conservative update. demand_in caps the entering flux, supply_out the
/// exiting flux. Returns (inflow, outflow) vehicle counts for the step.
std::pair<double, double> ctm_step(CtmGrid& grid, const FundamentalDiagram& fd, double demand_in,
                                   double supply_out);

struct CtmResult {
    double cell_length = 0.0;
    double step = 0.0;
    std::vector<double> times;                       // sampled row times
    std::vector<std::vector<double>> density;        // per sampled time, per cell
    std::vector<double> q_in, q_out;                 // veh per objective step
    std::vector<double> arrivals;                    // per vehicle with a stop, -1 if unreached
    double stored_initial = 0.0, stored_final = 0.0; // veh on segment
    double total_in = 0.0, total_out = 0.0;          // veh through boundaries
};

/// Time-stepped simulation of a scenario: vehicles drive through the cell
/// field at the local space-mean speed and lower their cell's capacity to the
/// passing rate while stopped. Densities are sampled every `sample_dt`.
CtmResult ctm_simulate(const Scenario& scenario, double sample_dt = 1.0);

}  // namespace curbflow

#endif
