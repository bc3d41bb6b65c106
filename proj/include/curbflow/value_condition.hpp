#ifndef CURBFLOW_VALUE_CONDITION_HPP
#define CURBFLOW_VALUE_CONDITION_HPP

#include <string>

#include "curbflow/errors.hpp"
#include "curbflow/fundamental_diagram.hpp"

namespace curbflow {

/// One constraint block prescribing the cumulative count M on part of the
/// (t,x) domain. All four kinds share the representation
///   value(s, y) = base + rate*(s - t_lo) - density*(y - x_lo)
/// over a degenerate rectangle (a time segment at fixed x, or an x segment
/// at t = 0).
struct ValueCondition {
    enum class Kind { initial, upstream, downstream, internal };

    Kind kind;
    double x_lo = 0.0, x_hi = 0.0;  // position extent (x_lo == x_hi except initial)
    double t_lo = 0.0, t_hi = 0.0;  // time extent (0 for initial)
    double base = 0.0;              // count at the (t_lo, x_lo) corner, veh
    double rate = 0.0;              // d value / dt: boundary flow or passing rate, veh/s
    double density = 0.0;           // -d value / dx: initial density, veh/m

    double value_at(double s, double y) const {
        return base + rate * (s - t_lo) - density * (y - x_lo);
    }

    static ValueCondition initial_cell(double x_lo, double x_hi, double rho, double base) {
        if (!(x_hi > x_lo)) throw DomainError("initial cell: empty extent");
        ValueCondition c;
        c.kind = Kind::initial;
        c.x_lo = x_lo;
        c.x_hi = x_hi;
        c.density = rho;
        c.base = base;
        return c;
    }

    static ValueCondition upstream_flow(double t_lo, double t_hi, double flow, double base) {
        return boundary(Kind::upstream, 0.0, t_lo, t_hi, flow, base);
    }

    static ValueCondition downstream_flow(double x, double t_lo, double t_hi, double flow,
                                          double base) {
        return boundary(Kind::downstream, x, t_lo, t_hi, flow, base);
    }

    /// Stationary bottleneck at position x passing at most `rate` veh/s,
    /// anchored at `base` vehicles when it activates.
    static ValueCondition internal_stop(double x, double t_lo, double t_hi, double rate,
                                        double base) {
        return boundary(Kind::internal, x, t_lo, t_hi, rate, base);
    }

private:
    static ValueCondition boundary(Kind kind, double x, double t_lo, double t_hi, double rate,
                                   double base) {
        if (!(t_hi >= t_lo)) throw DomainError("value condition: empty time extent");
        if (rate < 0.0) throw DomainError("value condition: negative flow rate");
        ValueCondition c;
        c.kind = kind;
        c.x_lo = c.x_hi = x;
        c.t_lo = t_lo;
        c.t_hi = t_hi;
        c.rate = rate;
        c.base = base;
        return c;
    }
};

/// Lax-Hopf component solution of a single condition at (t, x):
///   inf over condition points (s,y) with (x-y)/(t-s) in [-w_c, v_f] of
///   value(s,y) + (t-s)*phi((x-y)/(t-s)),
/// +infinity when nothing is reachable. phi is affine on [-w_c, v_f] for the
/// triangular FD, so the infimum over the (clipped) segment is attained at an
/// endpoint; we evaluate exactly two candidates.
double component_solution(const ValueCondition& cond, double t, double x,
                          const FundamentalDiagram& fd);

}  // namespace curbflow

#endif
