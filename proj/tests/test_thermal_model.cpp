#include <doctest.h>

#include <array>
#include <cmath>

#include "heatctrl/errors.hpp"
#include "heatctrl/thermal_model.hpp"

using namespace heatctrl;

namespace {

// Parameters matching the hand-evaluated dynamics cases.
RawBuildingParams desk_raw() {
    RawBuildingParams raw;
    raw.h_ve_tr = 200.0;
    raw.c_bldg_specific = 250000.0;
    raw.a_floor = 200.0;
    raw.h_room = 2.5;
    raw.water_volume = 0.5;
    raw.h_rad_con = 800.0;
    raw.mdot_hp = 0.3;
    raw.wall_split = 0.5;
    raw.h_wall = 600.0;
    raw.variant = ModelVariant::two_state;
    return raw;
}

// Independent 3x3 linear solve (Gaussian elimination with partial pivoting)
// used as the steady-state oracle.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

}  // namespace

TEST_SUITE_BEGIN("thermal_model");

TEST_CASE("derive_params computes capacities") {
    const BuildingParams p = derive_params(desk_raw());
    CHECK(p.cap_bldg == doctest::Approx(5.0e7).epsilon(1e-12));
    CHECK(p.cap_water == doctest::Approx(0.5 * 998.0 * 4186.0).epsilon(1e-12));
    CHECK(p.h_rad_con == 800.0);
}

TEST_CASE("derive_params rejects non-positive inputs") {
    RawBuildingParams raw = desk_raw();
    raw.a_floor = 0.0;
    CHECK_THROWS_AS(derive_params(raw), ConfigError);
    raw = desk_raw();
    raw.h_ve_tr = -1.0;
    CHECK_THROWS_AS(derive_params(raw), ConfigError);
    raw = desk_raw();
    raw.wall_split = 1.0;
    CHECK_THROWS_AS(derive_params(raw), ConfigError);
}

TEST_CASE("two-state equilibrium derivative is exactly zero") {
    const BuildingParams p = derive_params(desk_raw());
    const BuildingState s{20.0, 20.0, 20.0};
    const DisturbanceSample d{20.0, 0.0};
    const StateDerivative k = rhs_two_state(s, d, 20.0, p);
    CHECK(k.d_room == 0.0);
    CHECK(k.d_wall == 0.0);
    CHECK(k.d_hp_ret == 0.0);
}

TEST_CASE("two-state hand-evaluated cases") {
    RawBuildingParams raw = desk_raw();
    const BuildingParams p = derive_params(raw);

    const BuildingState s{20.0, 20.0, 30.0};
    const DisturbanceSample d{0.0, 0.0};
    const StateDerivative k = rhs_two_state(s, d, 35.0, p);

    const double expect_room = (800.0 * 10.0 - 200.0 * 20.0) / 5.0e7;  // 8.0e-5 K/s
    CHECK(k.d_room == expect_room);
    CHECK(std::abs(k.d_room - 8.0e-5) < 1e-12);

    const double expect_ret = (0.3 * 4186.0 * 5.0 - 800.0 * 10.0) / p.cap_water;
    CHECK(std::abs(k.d_hp_ret - expect_ret) < 1e-15);
    // Magnitude sanity against the rounded hand value -8.239e-4 K/s.
    CHECK(k.d_hp_ret == doctest::Approx(-8.239e-4).epsilon(2e-4));
}

TEST_CASE("three-state equilibrium and gain split") {
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    const BuildingParams p = derive_params(raw);
    const BuildingState s{20.0, 20.0, 20.0};
    const StateDerivative k = rhs_three_state(s, DisturbanceSample{20.0, 0.0}, 20.0, p);
    CHECK(k.d_room == 0.0);
    CHECK(k.d_wall == 0.0);
    CHECK(k.d_hp_ret == 0.0);

    // With all gains routed to the zone, the wall node sees none of them.
    const StateDerivative g = rhs_three_state(s, DisturbanceSample{20.0, 1000.0}, 20.0, p);
    CHECK(g.d_room == doctest::Approx(1000.0 / ((1.0 - p.wall_split) * p.cap_bldg)));
    CHECK(g.d_wall == 0.0);
}

TEST_CASE("three-state zone equation approaches the two-state form") {
    // wall_split -> 0 with a near-perfect zone<->wall coupling and the wall
    // relaxed to its quasi-static equilibrium.
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    raw.wall_split = 1e-9;
    raw.h_wall = 1e9;
    const BuildingParams p3 = derive_params(raw);
    raw.variant = ModelVariant::two_state;
    const BuildingParams p2 = derive_params(raw);

    const DisturbanceSample d{0.0, 500.0};
    BuildingState s{21.0, 0.0, 32.0};
    s.t_wall = (p3.h_wall * s.t_room + p3.h_ve_tr * d.t_amb) / (p3.h_wall + p3.h_ve_tr);

    const StateDerivative k3 = rhs_three_state(s, d, 40.0, p3);
    const StateDerivative k2 = rhs_two_state(s, d, 40.0, p2);
    CHECK(std::abs(k3.d_room - k2.d_room) < 1e-6);
    CHECK(k3.d_hp_ret == k2.d_hp_ret);
}

TEST_CASE("three-state steady state matches the linear-solve oracle") {
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    raw.wall_split = 0.4;
    raw.h_wall = 700.0;
    const BuildingParams p = derive_params(raw);

    const DisturbanceSample d{-5.0, 800.0};
    const double t_sup = 45.0;

    // Assemble A x = -b for rhs(x) = A x + b using the model's own structure.
    const double cz = (1.0 - p.wall_split) * p.cap_bldg;
    const double cw = p.wall_split * p.cap_bldg;
    const std::array<std::array<double, 3>, 3> a{{
        {-(p.h_rad_con + p.h_wall) / cz, p.h_wall / cz, p.h_rad_con / cz},
        {p.h_wall / cw, -(p.h_wall + p.h_ve_tr) / cw, 0.0},
        {p.h_rad_con / p.cap_water, 0.0, -(p.mdot_hp * p.cp_water + p.h_rad_con) / p.cap_water},
    }};
    const std::array<double, 3> b{
        d.q_gain / cz,
        p.h_ve_tr * d.t_amb / cw,
        p.mdot_hp * p.cp_water * t_sup / p.cap_water,
    };
    const auto x = solve3(a, {-b[0], -b[1], -b[2]});

    const BuildingState steady{x[0], x[1], x[2]};
    const StateDerivative k = rhs_three_state(steady, d, t_sup, p);
    CHECK(std::abs(k.d_room) < 1e-9);
    CHECK(std::abs(k.d_wall) < 1e-9);
    CHECK(std::abs(k.d_hp_ret) < 1e-9);
}

TEST_CASE("rhs is affine: numerical superposition") {
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    const BuildingParams p = derive_params(raw);

    const BuildingState s0{18.0, 17.0, 28.0};
    const BuildingState s1{23.0, 21.0, 41.0};
    const DisturbanceSample d0{-3.0, 200.0};
    const DisturbanceSample d1{7.0, 1400.0};
    const double u0 = 30.0, u1 = 55.0;
    const double t = 0.37;

    auto lerp = [t](double a, double b) { return a + t * (b - a); };
    const BuildingState sm{lerp(s0.t_room, s1.t_room), lerp(s0.t_wall, s1.t_wall),
                           lerp(s0.t_hp_ret, s1.t_hp_ret)};
    const DisturbanceSample dm{lerp(d0.t_amb, d1.t_amb), lerp(d0.q_gain, d1.q_gain)};
    const double um = lerp(u0, u1);

    const StateDerivative k0 = rhs(s0, d0, u0, p);
    const StateDerivative k1 = rhs(s1, d1, u1, p);
    const StateDerivative km = rhs(sm, dm, um, p);
    CHECK(km.d_room == doctest::Approx(lerp(k0.d_room, k1.d_room)).epsilon(1e-12));
    CHECK(km.d_wall == doctest::Approx(lerp(k0.d_wall, k1.d_wall)).epsilon(1e-12));
    CHECK(km.d_hp_ret == doctest::Approx(lerp(k0.d_hp_ret, k1.d_hp_ret)).epsilon(1e-12));
}

TEST_CASE("system matrix is Hurwitz on desk parameters") {
    // Routh-Hurwitz on the characteristic polynomial s^3 + a2 s^2 + a1 s + a0:
    // stable iff a2 > 0, a0 > 0, a2*a1 > a0.
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    const BuildingParams p = derive_params(raw);
    const double cz = (1.0 - p.wall_split) * p.cap_bldg;
    const double cw = p.wall_split * p.cap_bldg;
    const double m00 = -(p.h_rad_con + p.h_wall) / cz;
    const double m01 = p.h_wall / cz;
    const double m02 = p.h_rad_con / cz;
    const double m10 = p.h_wall / cw;
    const double m11 = -(p.h_wall + p.h_ve_tr) / cw;
    const double m20 = p.h_rad_con / p.cap_water;
    const double m22 = -(p.mdot_hp * p.cp_water + p.h_rad_con) / p.cap_water;

    const double trace = m00 + m11 + m22;
    const double minors = (m00 * m11 - m01 * m10) + (m00 * m22 - m02 * m20) + (m11 * m22);
    const double det = m00 * m11 * m22 - m01 * m10 * m22 - m02 * m11 * m20;

    const double a2 = -trace;
    const double a1 = minors;
    const double a0 = -det;
    CHECK(a2 > 0.0);
    CHECK(a0 > 0.0);
    CHECK(a2 * a1 > a0);
}

TEST_CASE("integrate_step: equilibrium, single Euler step, partial substeps") {
    RawBuildingParams raw = desk_raw();
    const BuildingParams p = derive_params(raw);

    const BuildingState eq{20.0, 20.0, 20.0};
    const BuildingState eq2 = integrate_step(eq, DisturbanceSample{20.0, 0.0}, 20.0, p);
    CHECK(eq2.t_room == 20.0);
    CHECK(eq2.t_hp_ret == 20.0);

    // dT_room/dt = 8e-5 K/s held over a single 900 s Euler step: +0.072 K.
    BuildingState s{20.0, 20.0, 30.0};
    const DisturbanceSample d{0.0, 0.0};
    const BuildingState one = integrate_step(s, d, 30.0, p, 900.0, 900.0);
    CHECK(one.t_room == doctest::Approx(20.0 + 8.0e-5 * 900.0).epsilon(1e-12));

    // Partial final substep: dt = 900, substep = 400 -> 400 + 400 + 100.
    const BuildingState part = integrate_step(s, d, 30.0, p, 900.0, 400.0);
    CHECK(std::isfinite(part.t_room));

    // 60 s substeps against a 1 s reference: the room node agrees within
    // 1e-3 K after one interval (the loop node is much faster and looser).
    const BuildingState coarse = integrate_step(s, d, 35.0, p, 900.0, 60.0);
    const BuildingState fine = integrate_step(s, d, 35.0, p, 900.0, 1.0);
    CHECK(std::abs(coarse.t_room - fine.t_room) < 1e-3);
    CHECK(std::abs(coarse.t_hp_ret - fine.t_hp_ret) < 0.05);
}

TEST_CASE("integration error halves with the substep (first order)") {
    RawBuildingParams raw = desk_raw();
    raw.variant = ModelVariant::three_state;
    const BuildingParams p = derive_params(raw);
    BuildingState s{16.0, 15.0, 22.0};
    const DisturbanceSample d{-8.0, 0.0};

    auto room_after = [&](double substep) {
        return integrate_step(s, d, 55.0, p, 900.0, substep).t_hp_ret;
    };
    const double ref = room_after(0.01);
    const double err120 = std::abs(room_after(120.0) - ref);
    const double err60 = std::abs(room_after(60.0) - ref);
    const double ratio = err120 / err60;
    CHECK(ratio > 1.5);
    CHECK(ratio < 2.5);
}

TEST_CASE("divergence guard names the offending component") {
    RawBuildingParams raw = desk_raw();
    raw.water_volume = 1e-4;  // tiny loop capacity destabilizes explicit Euler
    const BuildingParams p = derive_params(raw);
    BuildingState s{20.0, 20.0, 20.0};
    try {
        for (int i = 0; i < 200; ++i) {
            s = integrate_step(s, DisturbanceSample{0.0, 0.0}, 60.0, p, 900.0, 900.0);
        }
        FAIL("expected SimulationBlowupError");
    } catch (const SimulationBlowupError& e) {
        CHECK(std::string(e.what()).find("t_hp_ret") != std::string::npos);
    }
}

TEST_CASE("two-state integrate keeps the wall pinned to the room") {
    const BuildingParams p = derive_params(desk_raw());
    BuildingState s{22.0, 19.0, 35.0};  // deliberately inconsistent wall
    s = integrate_step(s, DisturbanceSample{5.0, 300.0}, 45.0, p);
    CHECK(s.t_wall == s.t_room);
}

TEST_SUITE_END();
