#include "curbflow/value_condition.hpp"

#include <algorithm>
#include <limits>

namespace curbflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double component_solution(const ValueCondition& cond, double t, double x,
                          const FundamentalDiagram& fd) {
    const double q_m = fd.q_m();
    const double rho_c = fd.rho_c();

    // Affine objective over the condition block: value(s,y) + (t-s)q_m - (x-y)rho_c.
    auto objective = [&](double s, double y) {
        return cond.value_at(s, y) + (t - s) * q_m - (x - y) * rho_c;
    };

    if (cond.kind == ValueCondition::Kind::initial) {
        if (t < 0.0) return kInf;
        if (t == 0.0)
            return (x >= cond.x_lo && x <= cond.x_hi) ? cond.value_at(0.0, x) : kInf;
        // Backward cone from (t,x) cuts t=0 at [x - v_f t, x + w_c t].
        const double y_lo = std::max(cond.x_lo, x - fd.v_f() * t);
        const double y_hi = std::min(cond.x_hi, x + fd.w_c() * t);
        if (y_lo > y_hi) return kInf;
        return std::min(objective(0.0, y_lo), objective(0.0, y_hi));
    }

    // Fixed-position kinds: free coordinate is s along [t_lo, t_hi].
    const double xc = cond.x_lo;
    if (t < cond.t_lo) return kInf;
    double s_hi = std::min(cond.t_hi, t);
    if (x > xc) {
        s_hi = std::min(s_hi, t - (x - xc) / fd.v_f());
    } else if (x < xc) {
        s_hi = std::min(s_hi, t - (xc - x) / fd.w_c());
    }
    if (s_hi < cond.t_lo) return kInf;
    return std::min(objective(cond.t_lo, xc), objective(s_hi, xc));
}

}  // namespace curbflow
