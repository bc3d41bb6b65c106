#ifndef CURBFLOW_FUNDAMENTAL_DIAGRAM_HPP
#define CURBFLOW_FUNDAMENTAL_DIAGRAM_HPP

#include <cmath>
#include <string>

#include "curbflow/errors.hpp"

namespace curbflow {

/// Triangular flow-density relation. Flow rises at v_f up to the critical
/// density, then falls along the congested branch with (positive) wave speed
/// w_c down to zero at jam density. Immutable once built.
class FundamentalDiagram {
public:
    // q_m is derived as v_f*rho_c; the congested branch must close the
    // triangle: w_c*(rho_m - rho_c) == q_m within 1e-9 relative.
    FundamentalDiagram(double v_f, double w_c, double rho_c, double rho_m)
        : v_f_(v_f), w_c_(w_c), rho_c_(rho_c), rho_m_(rho_m), q_m_(v_f * rho_c) {
        if (!(v_f > 0.0)) throw DomainError("fundamental diagram: v_f must be positive");
        if (!(w_c > 0.0)) throw DomainError("fundamental diagram: w_c must be positive");
        if (!(rho_c > 0.0 && rho_c < rho_m))
            throw DomainError("fundamental diagram: need 0 < rho_c < rho_m");
        const double closure = w_c_ * (rho_m_ - rho_c_);
        if (std::abs(closure - q_m_) > 1e-9 * q_m_)
            throw DomainError("fundamental diagram: triangle does not close, w_c*(rho_m-rho_c)=" +
                              std::to_string(closure) + " vs q_m=" + std::to_string(q_m_));
    }

    double v_f() const { return v_f_; }
    double w_c() const { return w_c_; }
    double rho_c() const { return rho_c_; }
    double rho_m() const { return rho_m_; }
    double q_m() const { return q_m_; }

    /// Q(rho) in veh/s. rho must lie in [0, rho_m].
    double flow(double rho) const {
        check_density(rho);
        return rho <= rho_c_ ? v_f_ * rho : w_c_ * (rho_m_ - rho);
    }

    /// Legendre-type cost rate of a characteristic with speed v,
    /// phi(v) = max_rho (Q(rho) - v*rho) = q_m - v*rho_c for v in [-w_c, v_f].
    double characteristic_cost(double v) const {
        if (v < -w_c_ - 1e-12 || v > v_f_ + 1e-12)
            throw DomainError("characteristic speed " + std::to_string(v) +
                              " outside [-w_c, v_f]");
        return q_m_ - v * rho_c_;
    }

    /// Space-mean speed Q(rho)/rho; v_f at rho = 0 by convention.
    double speed(double rho) const {
        check_density(rho);
        if (rho <= rho_c_) return v_f_;
        return flow(rho) / rho;
    }

    /// Max flow the segment can accept at local density rho.
    double supply(double rho) const {
        check_density(rho);
        return rho <= rho_c_ ? q_m_ : w_c_ * (rho_m_ - rho);
    }

    /// Max flow a region at density rho can send downstream.
    double demand(double rho) const {
        check_density(rho);
        return rho <= rho_c_ ? v_f_ * rho : q_m_;
    }

private:
    void check_density(double rho) const {
        if (rho < 0.0 || rho > rho_m_ + 1e-12)
            throw DomainError("density " + std::to_string(rho) + " outside [0, rho_m=" +
                              std::to_string(rho_m_) + "]");
    }

    double v_f_, w_c_, rho_c_, rho_m_, q_m_;
};

}  // namespace curbflow

#endif
