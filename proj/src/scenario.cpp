#include "curbflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "curbflow/errors.hpp"
#include "curbflow/rng.hpp"
#include "json.hpp"

namespace curbflow {

using nlohmann::json;

bool SignalTiming::is_red(double t) const {
    if (!enabled()) return false;
    double phase = std::fmod(t - red_start, cycle);
    if (phase < 0.0) phase += cycle;
    return phase < red;
}

std::vector<const StopVehicle*> Scenario::approaching_vehicles() const {
    std::vector<const StopVehicle*> out;
    for (const auto& v : vehicles)
        if (v.approaching()) out.push_back(&v);
    return out;
}

std::vector<const StopVehicle*> Scenario::on_segment_vehicles() const {
    std::vector<const StopVehicle*> out;
    for (const auto& v : vehicles)
        if (!v.approaching()) out.push_back(&v);
    return out;
}

double Scenario::demand_at(int k) const {
    if (demand.empty()) return 0.0;
    return demand[std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)),
                                        demand.size() - 1)];
}

double Scenario::supply_at(int k) const {
    if (supply.empty()) return fd.q_m();
    return supply[std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)),
                                        supply.size() - 1)];
}

BoundaryProfile Scenario::upstream_profile() const {
    std::vector<double> rates;
    for (int k = 0; k < steps(); ++k) rates.push_back(demand_at(k));
    return BoundaryProfile::uniform_steps(rates, dt, horizon);
}

BoundaryProfile Scenario::downstream_profile() const {
    // Split each supply interval at signal switch times; rate 0 during red.
    BoundaryProfile p;
    std::set<double> cuts;
    for (int k = 0; k <= steps(); ++k) cuts.insert(std::min(k * dt, horizon));
    if (signal.enabled()) {
        for (double t = signal.red_start; t < horizon; t += signal.cycle) {
            if (t > 0.0 && t < horizon) cuts.insert(t);
            const double red_end = t + signal.red;
            if (red_end > 0.0 && red_end < horizon) cuts.insert(red_end);
        }
    }
    cuts.insert(0.0);
    cuts.insert(horizon);
    std::vector<double> ts(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        const int k = static_cast<int>(mid / dt);
        p.times.push_back(ts[i]);
        p.rates.push_back(signal.is_red(mid) ? 0.0 : supply_at(k));
    }
    p.times.push_back(ts.back());
    return p;
}

void Scenario::validate() const {
    if (!(length > 0.0) || !(horizon > 0.0)) throw ConfigError("scenario: bad geometry");
    if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
    if (dt > length / fd.v_f() + 1e-9)
        throw ConfigError("scenario: dt violates the stability bound dt <= L/v_f");
    if (n_lanes < 1) throw ConfigError("scenario: n_lanes must be >= 1");
    if (initial_density.empty()) throw ConfigError("scenario: initial_density required");
    for (double r : initial_density)
        if (r < 0.0 || r > fd.rho_m() + 1e-12)
            throw ConfigError("scenario: initial density outside [0, rho_m]");
    const auto need = static_cast<std::size_t>(steps());
    if (demand.size() < need || supply.size() < need)
        throw ConfigError("scenario: demand/supply must cover the horizon (" +
                          std::to_string(need) + " steps)");
    for (double q : demand)
        if (q < 0.0 || q > fd.q_m() + 1e-12) throw ConfigError("scenario: demand outside [0, q_m]");
    for (double q : supply)
        if (q < 0.0 || q > fd.q_m() + 1e-12) throw ConfigError("scenario: supply outside [0, q_m]");
    if (signal.enabled()) {
        if (signal.red >= signal.cycle) throw ConfigError("scenario: red must be below cycle");
        if (signal.red_start < -signal.red - 1e-9 || signal.red_start > signal.green() + 1e-9)
            throw ConfigError("scenario: red_start outside [-T_r, T_g]");
    }
    std::set<int> ids;
    for (const auto& v : vehicles) {
        if (!ids.insert(v.id).second) throw ConfigError("scenario: duplicate vehicle id");
        if (v.entry_time.has_value() == v.start_position.has_value())
            throw ConfigError("scenario: vehicle needs exactly one of entry_time/start_position");
        if (v.entry_time && *v.entry_time < 0.0)
            throw ConfigError("scenario: negative entry time");
        if (v.start_position && (*v.start_position < 0.0 || *v.start_position > length))
            throw ConfigError("scenario: start position outside the segment");
        if (!(v.stop_duration > 0.0)) throw ConfigError("scenario: stop duration must be positive");
        if (v.stop_position && (*v.stop_position <= 0.0 || *v.stop_position >= length))
            throw ConfigError("scenario: stop position outside (0, L)");
    }
    // Same-position stops whose nominal (free-flow) windows overlap are not
    // modeled; reject them up front.
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
            const auto& a = vehicles[i];
            const auto& b = vehicles[j];
            if (!a.stop_position || !b.stop_position) continue;
            if (*a.stop_position != *b.stop_position) continue;
            auto window = [&](const StopVehicle& v) {
                const double depart = v.approaching() ? *v.entry_time : 0.0;
                const double from = v.approaching() ? 0.0 : *v.start_position;
                const double arr = depart + (*v.stop_position - from) / fd.v_f();
                return std::pair<double, double>(arr, arr + v.stop_duration);
            };
            auto [a0, a1] = window(a);
            auto [b0, b1] = window(b);
            if (a0 < b1 && b0 < a1)
                throw ConfigError("scenario: vehicles " + std::to_string(a.id) + " and " +
                                  std::to_string(b.id) + " stop at the same position with " +
                                  "overlapping windows");
        }
    }
    auto check_weight_vec = [&](const std::vector<double>& v, const char* what) {
        if (!v.empty() && v.size() != approaching_vehicles().size())
            throw ConfigError(std::string("scenario: ") + what +
                              " must have one entry per approaching vehicle");
    };
    check_weight_vec(weights.w_d, "W_D");
    check_weight_vec(weights.x_d, "X_D");
    check_weight_vec(weights.x_us, "X_US");
    check_weight_vec(weights.x_ds, "X_DS");
    if (!weights.w_d.empty() && weights.x_d.empty())
        throw ConfigError("scenario: W_D given without X_D");
    if (weights.w_sb < 0.0) throw ConfigError("scenario: w_SB must be nonnegative");
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

std::vector<double> as_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + " must be an array");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("scenario JSON parse failure: ") + e.what());
    }
    reject_unknown_keys(j,
                        {"fd", "length", "horizon", "n_lanes", "dt", "initial_density", "demand",
                         "supply", "signal", "vehicles", "weights", "name"},
                        "scenario");
    Scenario s;
    const auto& jfd = j.at("fd");
    reject_unknown_keys(jfd, {"v_f", "w_c", "rho_c", "rho_m", "q_m"}, "fd");
    s.fd = FundamentalDiagram(jfd.at("v_f").get<double>(), jfd.at("w_c").get<double>(),
                              jfd.at("rho_c").get<double>(), jfd.at("rho_m").get<double>());
    if (jfd.contains("q_m")) {
        const double q = jfd["q_m"].get<double>();
        if (std::abs(q - s.fd.q_m()) > 1e-9 * s.fd.q_m())
            throw ConfigError("fd: q_m inconsistent with v_f*rho_c");
    }
    s.length = j.at("length").get<double>();
    s.horizon = j.at("horizon").get<double>();
    if (j.contains("n_lanes")) s.n_lanes = j["n_lanes"].get<int>();
    if (j.contains("dt")) s.dt = j["dt"].get<double>();
    s.initial_density = as_vector(j.at("initial_density"), "initial_density");
    s.demand = as_vector(j.at("demand"), "demand");
    s.supply = as_vector(j.at("supply"), "supply");
    if (j.contains("signal")) {
        const auto& js = j["signal"];
        reject_unknown_keys(js, {"cycle", "red", "red_start"}, "signal");
        s.signal.cycle = js.at("cycle").get<double>();
        s.signal.red = js.at("red").get<double>();
        if (js.contains("red_start")) s.signal.red_start = js["red_start"].get<double>();
    }
    if (j.contains("vehicles")) {
        for (const auto& jv : j["vehicles"]) {
            reject_unknown_keys(jv,
                                {"id", "entry_time", "start_position", "stop_position",
                                 "stop_duration", "lane_blocking"},
                                "vehicle");
            StopVehicle v;
            v.id = jv.at("id").get<int>();
            if (jv.contains("entry_time")) v.entry_time = jv["entry_time"].get<double>();
            if (jv.contains("start_position")) v.start_position = jv["start_position"].get<double>();
            if (jv.contains("stop_position") && !jv["stop_position"].is_null())
                v.stop_position = jv["stop_position"].get<double>();
            v.stop_duration = jv.at("stop_duration").get<double>();
            if (jv.contains("lane_blocking")) v.lane_blocking = jv["lane_blocking"].get<bool>();
            s.vehicles.push_back(v);
        }
    }
    if (j.contains("weights")) {
        const auto& jw = j["weights"];
        reject_unknown_keys(jw, {"w_SB", "W_D", "X_D", "X_US", "X_DS"}, "weights");
        if (jw.contains("w_SB")) s.weights.w_sb = jw["w_SB"].get<double>();
        if (jw.contains("W_D")) s.weights.w_d = as_vector(jw["W_D"], "W_D");
        if (jw.contains("X_D")) s.weights.x_d = as_vector(jw["X_D"], "X_D");
        if (jw.contains("X_US")) s.weights.x_us = as_vector(jw["X_US"], "X_US");
        if (jw.contains("X_DS")) s.weights.x_ds = as_vector(jw["X_DS"], "X_DS");
    }
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    s.validate();
    return s;
}

Scenario Scenario::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Scenario::to_json_text() const {
    json j;
    j["fd"] = {{"v_f", fd.v_f()}, {"w_c", fd.w_c()}, {"rho_c", fd.rho_c()}, {"rho_m", fd.rho_m()}};
    j["length"] = length;
    j["horizon"] = horizon;
    j["n_lanes"] = n_lanes;
    j["dt"] = dt;
    j["initial_density"] = initial_density;
    j["demand"] = demand;
    j["supply"] = supply;
    if (signal.enabled())
        j["signal"] = {{"cycle", signal.cycle}, {"red", signal.red}, {"red_start", signal.red_start}};
    json jv = json::array();
    for (const auto& v : vehicles) {
        json e;
        e["id"] = v.id;
        if (v.entry_time) e["entry_time"] = *v.entry_time;
        if (v.start_position) e["start_position"] = *v.start_position;
        if (v.stop_position) e["stop_position"] = *v.stop_position;
        e["stop_duration"] = v.stop_duration;
        jv.push_back(e);
    }
    j["vehicles"] = jv;
    json jw;
    jw["w_SB"] = weights.w_sb;
    if (!weights.w_d.empty()) jw["W_D"] = weights.w_d;
    if (!weights.x_d.empty()) jw["X_D"] = weights.x_d;
    if (!weights.x_us.empty()) jw["X_US"] = weights.x_us;
    if (!weights.x_ds.empty()) jw["X_DS"] = weights.x_ds;
    j["weights"] = jw;
    if (!name.empty()) j["name"] = name;
    return j.dump(2);
}

std::uint64_t Scenario::content_hash() const { return hash_str(to_json_text()); }

Scenario make_application_scenario() {
    Scenario s;
    s.name = "ride-hailing-application";
    s.fd = FundamentalDiagram(14.0, 2.8, 0.04, 0.24);
    s.length = 450.0;
    s.horizon = 900.0;
    s.n_lanes = 2;
    s.dt = 10.0;
    s.initial_density.assign(10, 0.02);
    s.demand.assign(90, s.fd.q_m());
    s.supply.assign(90, s.fd.q_m());
    // Red for the first 20 s: the cycle starts mid-red with 20 s remaining.
    s.signal.cycle = 120.0;
    s.signal.red = 48.0;
    s.signal.red_start = 20.0 - 48.0;
    const double entries[10] = {30, 60, 90, 120, 250, 270, 300, 330, 520, 550};
    const double durations[10] = {60, 120, 90, 60, 60, 120, 90, 60, 90, 120};
    for (int i = 0; i < 10; ++i) {
        StopVehicle v;
        v.id = i + 1;
        v.entry_time = entries[i];
        v.stop_duration = durations[i];
        s.vehicles.push_back(v);
    }
    s.weights.w_sb = 0.1;
    return s;
}

int sub_scenario_count(int scenario_class) {
    switch (scenario_class) {
        case 1: return 12;
        case 2: return 13;
        case 3: return 13;
        case 4: return 12;
        case 5: return 13;
        default: throw ConfigError("scenario class must be 1..5");
    }
}

ClassShape class_shape(int scenario_class) {
    switch (scenario_class) {
        case 1: return {4, 0};
        case 2: return {4, 2};
        case 3: return {4, 4};
        case 4: return {6, 0};
        case 5: return {6, 2};
        default: throw ConfigError("scenario class must be 1..5");
    }
}

Scenario make_local_instance(int scenario_class, int sub_index, std::uint64_t master_seed) {
    const ClassShape shape = class_shape(scenario_class);
    if (sub_index < 0 || sub_index >= sub_scenario_count(scenario_class))
        throw ConfigError("sub-scenario index out of range");
    auto rng = make_rng(derive_seed(master_seed, "sub-scenario",
                                    static_cast<std::uint64_t>(scenario_class),
                                    static_cast<std::uint64_t>(sub_index)));
    Scenario s;
    s.name = "C" + std::to_string(scenario_class) + "-s" + std::to_string(sub_index);
    s.fd = FundamentalDiagram(14.0, 2.8, 0.04, 0.24);
    s.length = 450.0;
    s.horizon = 600.0;
    s.n_lanes = 2;
    s.dt = 10.0;
    s.signal.cycle = 120.0;
    s.signal.red = 48.0;

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double q_m = s.fd.q_m();
    const double rho_m = s.fd.rho_m();
    s.initial_density.resize(5);
    for (auto& r : s.initial_density) r = u01(rng) * rho_m;
    const double demand_level = u01(rng) * q_m;
    const double supply_level = u01(rng) * q_m;
    s.demand.assign(static_cast<std::size_t>(s.steps()), demand_level);
    s.supply.assign(static_cast<std::size_t>(s.steps()), supply_level);
    s.signal.red_start = -s.signal.red + u01(rng) * (s.signal.red + s.signal.green());

    std::uniform_int_distribution<int> entry_step(0, 15);   // 0..150 s, 10 s ticks
    std::uniform_int_distribution<int> dur_steps(1, 6);     // 30..180 s, 30 s ticks
    const double grid_lo = s.fd.w_c() * s.dt;                // open bound
    const double grid_hi = s.length - s.fd.v_f() * s.dt;
    std::vector<double> grid;
    for (double x = s.fd.v_f(); x < s.length; x += s.fd.v_f())
        if (x > grid_lo && x < grid_hi) grid.push_back(x);
    std::uniform_int_distribution<std::size_t> grid_pick(0, grid.size() - 1);

    int next_id = 1;
    for (int i = 0; i < shape.approaching; ++i) {
        StopVehicle v;
        v.id = next_id++;
        v.entry_time = 10.0 * entry_step(rng);
        v.stop_duration = 30.0 * dur_steps(rng);
        s.vehicles.push_back(v);
    }
    for (int i = 0; i < shape.on_segment; ++i) {
        for (int attempt = 0;; ++attempt) {
            const double stop = grid[grid_pick(rng)];
            // Start at or upstream of the assigned stop, on the v_f grid.
            const auto upstream_slots = static_cast<int>(stop / s.fd.v_f());
            std::uniform_int_distribution<int> start_pick(0, upstream_slots);
            const double start = s.fd.v_f() * start_pick(rng);
            StopVehicle v;
            v.id = next_id;
            v.start_position = std::min(start, stop);
            v.stop_position = stop;
            v.stop_duration = 30.0 * dur_steps(rng);
            const bool clash = std::any_of(s.vehicles.begin(), s.vehicles.end(), [&](const auto& o) {
                return o.stop_position && *o.stop_position == stop;
            });
            if (!clash || attempt > 50) {
                s.vehicles.push_back(v);
                ++next_id;
                break;
            }
        }
    }
    s.weights.w_sb = 0.1;
    s.validate();
    return s;
}

}  // namespace curbflow
