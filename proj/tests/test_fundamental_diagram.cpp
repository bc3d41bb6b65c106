#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "curbflow/fundamental_diagram.hpp"
#include "doctest.h"

using curbflow::DomainError;
using curbflow::FundamentalDiagram;

namespace {
FundamentalDiagram reference_fd() { return FundamentalDiagram(14.0, 2.8, 0.04, 0.24); }
}  // namespace

TEST_CASE("triangular flow values") {
    const auto fd = reference_fd();
    CHECK(fd.q_m() == 14.0 * 0.04);
    CHECK(fd.flow(0.02) == doctest::Approx(0.28).epsilon(1e-15));
    CHECK(fd.flow(0.04) == doctest::Approx(0.56).epsilon(1e-15));
    CHECK(fd.flow(0.24) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fd.flow(0.10) == doctest::Approx(2.8 * (0.24 - 0.10)).epsilon(1e-15));
    CHECK_THROWS_AS(fd.flow(-0.01), DomainError);
    CHECK_THROWS_AS(fd.flow(0.25), DomainError);
}

TEST_CASE("flow is concave with max q_m at the critical density") {
    const auto fd = reference_fd();
    double best = 0.0;
    for (double rho = 0.0; rho <= fd.rho_m() + 1e-12; rho += 1e-4)
        best = std::max(best, fd.flow(std::min(rho, fd.rho_m())));
    CHECK(std::abs(best - fd.q_m()) < 1e-9);
    // Continuity at the kink.
    CHECK(fd.flow(fd.rho_c() - 1e-12) == doctest::Approx(fd.flow(fd.rho_c())).epsilon(1e-9));
}

TEST_CASE("characteristic cost") {
    const auto fd = reference_fd();
    CHECK(fd.characteristic_cost(14.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fd.characteristic_cost(0.0) == doctest::Approx(0.56).epsilon(1e-15));
    CHECK(fd.characteristic_cost(-2.8) == doctest::Approx(0.672).epsilon(1e-12));
    CHECK(fd.characteristic_cost(-2.8) == doctest::Approx(fd.w_c() * fd.rho_m()).epsilon(1e-12));
    CHECK_THROWS_AS(fd.characteristic_cost(14.1), DomainError);
    CHECK_THROWS_AS(fd.characteristic_cost(-2.9), DomainError);
}

TEST_CASE("characteristic cost equals the vertex maximum of flow - v*rho") {
    // The objective is piecewise-linear in rho, so checking the three
    // vertices of the triangle is exhaustive.
    const auto fd = reference_fd();
    for (double v = -fd.w_c(); v <= fd.v_f() + 1e-9; v += 0.05) {
        const double vv = std::min(v, fd.v_f());
        double vertex_max = 0.0;
        for (double rho : {0.0, fd.rho_c(), fd.rho_m()})
            vertex_max = std::max(vertex_max, fd.flow(rho) - vv * rho);
        CHECK(fd.characteristic_cost(vv) == doctest::Approx(vertex_max).epsilon(1e-12));
    }
}

TEST_CASE("speed") {
    const auto fd = reference_fd();
    CHECK(fd.speed(0.02) == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(fd.speed(0.24) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fd.speed(0.14) == doctest::Approx(0.392 / 0.14).epsilon(1e-12));
    CHECK(fd.speed(0.0) == 14.0);  // convention
}

TEST_CASE("construction rejects open or degenerate triangles") {
    CHECK_THROWS_AS(FundamentalDiagram(14.0, 2.8, 0.04, 0.30), DomainError);
    CHECK_THROWS_AS(FundamentalDiagram(-1.0, 2.8, 0.04, 0.24), DomainError);
    CHECK_THROWS_AS(FundamentalDiagram(14.0, 2.8, 0.24, 0.04), DomainError);
}
