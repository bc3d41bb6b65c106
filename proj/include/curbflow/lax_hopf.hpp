#ifndef CURBFLOW_LAX_HOPF_HPP
#define CURBFLOW_LAX_HOPF_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "curbflow/fundamental_diagram.hpp"
#include "curbflow/value_condition.hpp"

namespace curbflow {

/// Cumulative count M on a regular (t, x) lattice. The x lattice always
/// contains 0 and L; the final column may be a short cell when dx does not
/// divide L. Datum M(0,0) = 0.
struct CountSurface {
    double dt_g = 1.0;
    std::vector<double> ts;  // lattice times, ascending
    std::vector<double> xs;  // lattice positions, ascending, xs.front()=0, xs.back()=L
    std::vector<double> m;   // row-major [it * xs.size() + ix], veh

    std::size_t nt() const { return ts.size(); }
    std::size_t nx() const { return xs.size(); }
    double at(std::size_t it, std::size_t ix) const { return m[it * xs.size() + ix]; }

    /// Backward-difference density per x-cell, clamped to [0, rho_m]:
    /// rho[it][ix] covers [xs[ix], xs[ix+1]). Dimensions nt x (nx-1).
    std::vector<std::vector<double>> density_field(double rho_m) const;

    /// In/outflow counts per aggregation step (veh). `step` must be a
    /// multiple of dt_g.
    void boundary_counts(double step, std::vector<double>& q_in,
                         std::vector<double>& q_out) const;

    /// Rows `t,x,M,rho` with 9 significant digits; the last x repeats the
    /// final cell's density.
    void write_csv(std::ostream& os, double rho_m) const;

    /// Checks monotonicity and slope bounds; returns human-readable
    /// violations (empty when the surface is consistent).
    std::vector<std::string> validate(const FundamentalDiagram& fd, double tol = 1e-9) const;
};

/// Piecewise-constant boundary flow profile: rate[i] applies on
/// [times[i], times[i+1]); times has one more entry than rates and spans the
/// full horizon.
struct BoundaryProfile {
    std::vector<double> times;
    std::vector<double> rates;

    static BoundaryProfile uniform_steps(const std::vector<double>& rates_per_step, double dt,
                                         double t_end);
    void check(double t_end) const;
};

/// Variational solution M(t,x) = min over conditions of their component
/// solutions, evaluable exactly at any point of [0,T] x [0,L].
class LaxHopfProblem {
public:
    LaxHopfProblem(FundamentalDiagram fd, double length, double horizon);

    const FundamentalDiagram& fd() const { return fd_; }
    double length() const { return length_; }
    double horizon() const { return horizon_; }
    const std::vector<ValueCondition>& conditions() const { return conditions_; }

    void add_condition(const ValueCondition& c);

    /// Appends one initial cell per density entry, tiling [0, L]; anchors the
    /// datum M(0,0) = 0.
    void add_initial_cells(const std::vector<double>& densities);

    /// Appends demand/supply profiles as chronologically anchored boundary
    /// conditions: each piece starts at the realized count at its start time,
    /// so blocked demand is dropped (no vertical queue) and a zero-rate piece
    /// freezes the downstream count during red. Conditions already present
    /// (initial cells, stops) participate in the anchoring.
    void add_anchored_boundaries(const BoundaryProfile& upstream,
                                 const BoundaryProfile& downstream);

    /// Exact M at one point; +infinity only if no condition is reachable.
    double value(double t, double x) const;

    /// Density from a symmetric count difference over `window` meters
    /// (clipped at the segment ends), clamped to [0, rho_m].
    double density(double t, double x, double window = 7.0) const;

    /// Mean density over [x_lo, x_hi] at time t, from exact count differences.
    double mean_density(double t, double x_lo, double x_hi) const;

    CountSurface solve_grid(double dt_g = 1.0, double dx_g = 0.0) const;

    /// Indices of conditions whose prescribed value is not attained by the
    /// min (dominated conditions). Expected for capped boundary pieces.
    std::vector<int> compatibility_warnings(double tol) const;

private:
    FundamentalDiagram fd_;
    double length_;
    double horizon_;
    std::vector<ValueCondition> conditions_;
};

}  // namespace curbflow

#endif
