#ifndef CURBFLOW_SCENARIO_HPP
#define CURBFLOW_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curbflow/fundamental_diagram.hpp"
#include "curbflow/lax_hopf.hpp"

namespace curbflow {

/// A vehicle that will block one lane while stopped. Approaching vehicles
/// carry an entry time and start at x = 0; on-segment vehicles carry a start
/// position and are already driving at t = 0.
struct StopVehicle {
    int id = 0;
    std::optional<double> entry_time;      // s, approaching vehicles
    std::optional<double> start_position;  // m, on-segment vehicles
    std::optional<double> stop_position;   // m; unset until a controller assigns it
    double stop_duration = 0.0;            // s
    bool lane_blocking = true;

    bool approaching() const { return entry_time.has_value(); }
};

struct SignalTiming {
    double cycle = 0.0;      // s; 0 disables the signal
    double red = 0.0;        // s of red per cycle
    double red_start = 0.0;  // s offset of the first red onset, may be negative

    bool enabled() const { return cycle > 0.0 && red > 0.0; }
    double green() const { return cycle - red; }
    bool is_red(double t) const;
};

struct ObjectiveWeights {
    double w_sb = 0.1;            // spillback penalty weight
    std::vector<double> w_d;      // detour weight per approaching vehicle (empty = 0)
    std::vector<double> x_d;      // desired stop positions (empty = no detour term)
    std::vector<double> x_us;     // max detour upstream of x_d (empty = unbounded)
    std::vector<double> x_ds;     // max detour downstream of x_d
};

/// Full non-controlled parameter bundle plus geometry and the vehicle list.
struct Scenario {
    FundamentalDiagram fd{14.0, 2.8, 0.04, 0.24};
    double length = 450.0;   // m
    double horizon = 600.0;  // s
    int n_lanes = 2;
    double dt = 10.0;  // s, boundary/objective step
    std::vector<double> initial_density;  // veh/m, cells tiling [0, length]
    std::vector<double> demand;           // veh/s per dt interval
    std::vector<double> supply;           // veh/s per dt interval
    SignalTiming signal;
    std::vector<StopVehicle> vehicles;
    ObjectiveWeights weights;
    std::string name;

    int steps() const { return static_cast<int>(std::llround(horizon / dt)); }
    std::vector<const StopVehicle*> approaching_vehicles() const;
    std::vector<const StopVehicle*> on_segment_vehicles() const;

    /// Demand rate for objective step k (0-based), last value extended.
    double demand_at(int k) const;
    double supply_at(int k) const;

    /// Downstream profile with red phases forced to zero flow; upstream
    /// profile straight from demand.
    BoundaryProfile upstream_profile() const;
    BoundaryProfile downstream_profile() const;

    void validate() const;  // throws ConfigError / DomainError

    static Scenario from_json_file(const std::string& path);
    static Scenario from_json_text(const std::string& text);
    std::string to_json_text() const;
    std::uint64_t content_hash() const;
};

/// The ride-hailing application scenario: 900 s horizon, ten approaching
/// vehicles, saturated demand and supply, signal red for the first 20 s.
Scenario make_application_scenario();

/// Deterministic experiment instance for scenario class 1..5 (approaching /
/// on-segment vehicle counts 4/0, 4/2, 4/4, 6/0, 6/2). Sub-scenarios vary
/// demand, supply, initial density, signal offset and vehicle data through
/// seeded draws.
Scenario make_local_instance(int scenario_class, int sub_index, std::uint64_t master_seed);

/// Number of sub-scenarios per class: 12 for C1 and C4, 13 for C2, C3, C5.
int sub_scenario_count(int scenario_class);

struct ClassShape {
    int approaching = 0;
    int on_segment = 0;
};
ClassShape class_shape(int scenario_class);

}  // namespace curbflow

#endif
