#include "curbflow/lax_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace curbflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<std::vector<double>> CountSurface::density_field(double rho_m) const {
    std::vector<std::vector<double>> rho(nt(), std::vector<double>(nx() - 1, 0.0));
    for (std::size_t it = 0; it < nt(); ++it) {
        for (std::size_t ix = 0; ix + 1 < nx(); ++ix) {
            const double dx = xs[ix + 1] - xs[ix];
            const double d = -(at(it, ix + 1) - at(it, ix)) / dx;
            rho[it][ix] = std::clamp(d, 0.0, rho_m);
        }
    }
    return rho;
}

void CountSurface::boundary_counts(double step, std::vector<double>& q_in,
                                   std::vector<double>& q_out) const {
    const double ratio = step / dt_g;
    const auto stride = static_cast<std::size_t>(std::llround(ratio));
    if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-9)
        throw DomainError("boundary_counts: step must be a multiple of the grid dt");
    q_in.clear();
    q_out.clear();
    for (std::size_t it = stride; it < nt(); it += stride) {
        q_in.push_back(at(it, 0) - at(it - stride, 0));
        q_out.push_back(at(it, nx() - 1) - at(it - stride, nx() - 1));
    }
}

void CountSurface::write_csv(std::ostream& os, double rho_m) const {
    const auto rho = density_field(rho_m);
    os << "t,x,M,rho\n";
    char buf[160];
    for (std::size_t it = 0; it < nt(); ++it) {
        for (std::size_t ix = 0; ix < nx(); ++ix) {
            const double r = rho[it][std::min(ix, nx() - 2)];
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", ts[it], xs[ix], at(it, ix), r);
            os << buf;
        }
    }
}

std::vector<std::string> CountSurface::validate(const FundamentalDiagram& fd, double tol) const {
    std::vector<std::string> out;
    auto report = [&](std::size_t it, std::size_t ix, const std::string& what) {
        if (out.size() < 20)
            out.push_back(what + " at t=" + std::to_string(ts[it]) + " x=" + std::to_string(xs[ix]));
    };
    for (std::size_t it = 0; it < nt(); ++it) {
        for (std::size_t ix = 0; ix + 1 < nx(); ++ix) {
            const double dm = at(it, ix + 1) - at(it, ix);
            const double dx = xs[ix + 1] - xs[ix];
            if (dm > tol) report(it, ix, "M increases in x");
            if (-dm / dx > fd.rho_m() + tol) report(it, ix, "density above rho_m");
        }
    }
    for (std::size_t it = 0; it + 1 < nt(); ++it) {
        for (std::size_t ix = 0; ix < nx(); ++ix) {
            const double dm = at(it + 1, ix) - at(it, ix);
            const double dt = ts[it + 1] - ts[it];
            if (dm < -tol) report(it, ix, "M decreases in t");
            if (dm / dt > fd.q_m() + tol) report(it, ix, "flow above q_m");
        }
    }
    return out;
}

BoundaryProfile BoundaryProfile::uniform_steps(const std::vector<double>& rates_per_step,
                                               double dt, double t_end) {
    BoundaryProfile p;
    double t = 0.0;
    for (double r : rates_per_step) {
        if (t >= t_end) break;
        p.times.push_back(t);
        p.rates.push_back(r);
        t += dt;
    }
    p.times.push_back(std::max(t_end, t));
    return p;
}

void BoundaryProfile::check(double t_end) const {
    if (times.size() != rates.size() + 1 || times.empty())
        throw ConfigError("boundary profile: times must have rates.size()+1 entries");
    if (times.front() != 0.0 || times.back() < t_end - 1e-9)
        throw ConfigError("boundary profile must span [0, T]");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i + 1] > times[i])) throw ConfigError("boundary profile: times not increasing");
}

LaxHopfProblem::LaxHopfProblem(FundamentalDiagram fd, double length, double horizon)
    : fd_(std::move(fd)), length_(length), horizon_(horizon) {
    if (!(length > 0.0) || !(horizon > 0.0))
        throw ConfigError("lax-hopf problem: need positive length and horizon");
}

void LaxHopfProblem::add_condition(const ValueCondition& c) {
    if (c.x_lo < -1e-9 || c.x_hi > length_ + 1e-9 || c.t_lo < -1e-9 || c.t_hi > horizon_ + 1e-9)
        throw DomainError("value condition extent outside the (t,x) domain");
    if (c.kind == ValueCondition::Kind::initial) {
        if (c.density < 0.0 || c.density > fd_.rho_m() + 1e-12)
            throw DomainError("initial density outside [0, rho_m]");
    } else if (c.rate > fd_.q_m() + 1e-9) {
        throw DomainError("boundary/internal rate above capacity");
    }
    conditions_.push_back(c);
}

void LaxHopfProblem::add_initial_cells(const std::vector<double>& densities) {
    if (densities.empty()) throw ConfigError("initial densities: need at least one cell");
    const double dx = length_ / static_cast<double>(densities.size());
    double base = 0.0;
    for (std::size_t l = 0; l < densities.size(); ++l) {
        const double x_lo = static_cast<double>(l) * dx;
        add_condition(ValueCondition::initial_cell(x_lo, x_lo + dx, densities[l], base));
        base -= densities[l] * dx;
    }
}

void LaxHopfProblem::add_anchored_boundaries(const BoundaryProfile& upstream,
                                             const BoundaryProfile& downstream) {
    upstream.check(horizon_);
    downstream.check(horizon_);
    // Merge the two breakpoint streams and anchor each new piece at the
    // realized count of its boundary. A piece never influences its own
    // anchor time, so the sweep is well defined.
    std::size_t iu = 0, id = 0;
    while (iu < upstream.rates.size() || id < downstream.rates.size()) {
        const double tu = iu < upstream.rates.size() ? upstream.times[iu] : kInf;
        const double td = id < downstream.rates.size() ? downstream.times[id] : kInf;
        if (tu <= td) {
            const double t_hi = std::min(upstream.times[iu + 1], horizon_);
            add_condition(ValueCondition::upstream_flow(
                tu, t_hi, std::min(upstream.rates[iu], fd_.q_m()), value(tu, 0.0)));
            ++iu;
        } else {
            const double t_hi = std::min(downstream.times[id + 1], horizon_);
            add_condition(ValueCondition::downstream_flow(
                length_, td, t_hi, std::min(downstream.rates[id], fd_.q_m()), value(td, length_)));
            ++id;
        }
    }
}

double LaxHopfProblem::value(double t, double x) const {
    double best = kInf;
    for (const auto& c : conditions_) {
        const double v = component_solution(c, t, x, fd_);
        if (v < best) best = v;
    }
    return best;
}

double LaxHopfProblem::density(double t, double x, double window) const {
    const double half = window / 2.0;
    const double a = std::max(0.0, x - half);
    const double b = std::min(length_, x + half);
    if (!(b > a)) throw DomainError("density probe outside the segment");
    const double d = -(value(t, b) - value(t, a)) / (b - a);
    return std::clamp(d, 0.0, fd_.rho_m());
}

double LaxHopfProblem::mean_density(double t, double x_lo, double x_hi) const {
    if (!(x_hi > x_lo)) throw DomainError("mean_density: empty interval");
    const double d = -(value(t, x_hi) - value(t, x_lo)) / (x_hi - x_lo);
    return std::clamp(d, 0.0, fd_.rho_m());
}

CountSurface LaxHopfProblem::solve_grid(double dt_g, double dx_g) const {
    if (dx_g <= 0.0) dx_g = fd_.v_f() * dt_g;
    if (dt_g > length_ / fd_.v_f() + 1e-9)
        throw ConfigError("grid dt violates the stability bound dt <= L/v_f");
    CountSurface s;
    s.dt_g = dt_g;
    for (double t = 0.0; t < horizon_ - 1e-9; t += dt_g) s.ts.push_back(t);
    s.ts.push_back(horizon_);
    for (double x = 0.0; x < length_ - 1e-9; x += dx_g) s.xs.push_back(x);
    s.xs.push_back(length_);
    s.m.resize(s.ts.size() * s.xs.size());
    for (std::size_t it = 0; it < s.ts.size(); ++it)
        for (std::size_t ix = 0; ix < s.xs.size(); ++ix)
            s.m[it * s.xs.size() + ix] = value(s.ts[it], s.xs[ix]);
    return s;
}

std::vector<int> LaxHopfProblem::compatibility_warnings(double tol) const {
    std::vector<int> bad;
    for (std::size_t i = 0; i < conditions_.size(); ++i) {
        const auto& c = conditions_[i];
        // Sample the extent at its endpoints and midpoint.
        const bool time_block = c.kind != ValueCondition::Kind::initial;
        double worst = 0.0;
        for (double a : {0.0, 0.5, 1.0}) {
            const double s = time_block ? c.t_lo + a * (c.t_hi - c.t_lo) : 0.0;
            const double y = time_block ? c.x_lo : c.x_lo + a * (c.x_hi - c.x_lo);
            worst = std::max(worst, c.value_at(s, y) - value(s, y));
        }
        if (worst > tol) bad.push_back(static_cast<int>(i));
    }
    return bad;
}

}  // namespace curbflow
