#include "doctest.h"

#include <cmath>
#include <random>

#include "cwkb/initial_action.hpp"

using namespace cwkb;

TEST_CASE("cat parameter geometry: centers, midpoints, swap") {
    const CatParams cp{1.0, 0.0, 0.0, 2.0};
    CHECK(cp.center_a().p == 1.0);
    CHECK(cp.center_a().q == 1.0);
    CHECK(cp.center_b().p == 1.0);
    CHECK(cp.center_b().q == -1.0);

    const CatParams rt = CatParams::from_centers(cp.center_a(), cp.center_b());
    CHECK(rt.P == cp.P);
    CHECK(rt.Q == cp.Q);
    CHECK(rt.dP == cp.dP);
    CHECK(rt.dQ == cp.dQ);

    const CatParams sw = cp.swapped();
    CHECK(sw.center_a().q == -1.0);
    CHECK(sw.center_b().q == 1.0);
}

TEST_CASE("plane-wave action is -x.y with constant gradient") {
    const Vec2 x{0.4, -0.2};
    const InitialAction s0 = InitialAction::plane_wave(x);
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 20; ++k) {
        const CVec2 y{complexd{u(rng), u(rng)}, complexd{u(rng), u(rng)}};
        const complexd v = s0.value(y);
        CHECK(std::abs(v - (-(x.p * y.p + x.q * y.q))) < 1e-14);
        const CVec2 g = s0.gradient(y);
        CHECK(std::abs(g.p + x.p) < 1e-15);
        CHECK(std::abs(g.q + x.q) < 1e-15);
    }
    CHECK(s0.real_on_real_chords());
}

TEST_CASE("Gaussian action: chi0 = exp(iS0/hbar) reproduces the Gaussian chord function") {
    const Vec2 X{0.7, -0.4};
    const InitialAction s0 = InitialAction::gaussian(X);
    const double hbar = 1.0;
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 50; ++k) {
        const Vec2 y{u(rng), u(rng)};
        const complexd S = s0.value(CVec2(y));
        // S0 = -X.y + (i/4) y.y
        const complexd want =
            complexd{-(X.p * y.p + X.q * y.q), 0.25 * (y.p * y.p + y.q * y.q)};
        CHECK(std::abs(S - want) < 1e-13);

        const complexd chi = std::exp(I_UNIT * S / hbar);
        const double mag = std::exp(-(y.p * y.p + y.q * y.q) / (4 * hbar));
        CHECK(std::abs(std::abs(chi) - mag) < 1e-13);
    }
    // Lagrangian surface through the centre: x0(0) = -dS0/dy(0) = X.
    const CVec2 g0 = s0.gradient(CVec2(Vec2{0, 0}));
    CHECK(std::abs(-g0.p - X.p) < 1e-15);
    CHECK(std::abs(-g0.q - X.q) < 1e-15);
    CHECK_FALSE(s0.real_on_real_chords());
}

TEST_CASE("cat action value and analytic gradient match finite differences") {
    const CatParams cp{1.0, 0.0, 0.5, 2.0};
    const InitialAction s0 = InitialAction::cat(cp);
    std::mt19937 rng(79);
    std::uniform_real_distribution<double> u(-2, 2);
    const double h = 1e-6;
    for (int k = 0; k < 40; ++k) {
        const CVec2 y{complexd{u(rng), u(rng)}, complexd{u(rng), u(rng)}};

        const complexd u1 = y.p + cp.dQ;
        const complexd v1 = y.q - cp.dP;
        const complexd want = -cp.Q * y.q - cp.P * u1 +
                              0.25 * I_UNIT * (u1 * u1) + 0.25 * I_UNIT * (v1 * v1);
        CHECK(std::abs(s0.value(y) - want) < 1e-12);

        const CVec2 g = s0.gradient(y);
        const complexd fp =
            (s0.value({y.p + h, y.q}) - s0.value({y.p - h, y.q})) / (2 * h);
        const complexd fq =
            (s0.value({y.p, y.q + h}) - s0.value({y.p, y.q - h})) / (2 * h);
        CHECK(std::abs(g.p - fp) < 1e-7);
        CHECK(std::abs(g.q - fq) < 1e-7);
    }
}

TEST_CASE("cat action has non-negative imaginary part on real chords") {
    const InitialAction s0 = InitialAction::cat({0.3, -1.2, 0.8, 1.5});
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int k = 0; k < 300; ++k) {
        const Vec2 y{u(rng), u(rng)};
        CHECK(s0.value(CVec2(y)).imag() >= 0.0);
    }
    CHECK_FALSE(s0.real_on_real_chords());
}

TEST_CASE("degenerate cat equals the Gaussian at the midpoint") {
    const Vec2 X{0.7, -0.4};
    const InitialAction cat0 = InitialAction::cat({X.p, X.q, 0.0, 0.0});
    const InitialAction gauss = InitialAction::gaussian(X);
    std::mt19937 rng(89);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 50; ++k) {
        const CVec2 y{complexd{u(rng), u(rng)}, complexd{u(rng), u(rng)}};
        CHECK(std::abs(cat0.value(y) - gauss.value(y)) < 1e-12);
        const CVec2 gc = cat0.gradient(y), gg = gauss.gradient(y);
        CHECK(std::abs(gc.p - gg.p) < 1e-12);
        CHECK(std::abs(gc.q - gg.q) < 1e-12);
    }
}

TEST_CASE("quadratic-form actions know whether they are real on real chords") {
    const Mat2c Mr{complexd{0.5, 0}, complexd{0.1, 0}, complexd{0.1, 0}, complexd{-0.2, 0}};
    const InitialAction real_form =
        InitialAction::quadratic_form(Mr, CVec2(Vec2{1, 2}), complexd{0.3, 0});
    CHECK(real_form.real_on_real_chords());

    const Mat2c Mc{complexd{0.5, 0.25}, complexd{0, 0}, complexd{0, 0}, complexd{0.5, 0}};
    const InitialAction complex_form = InitialAction::quadratic_form(Mc, CVec2(Vec2{0, 0}), 0.0);
    CHECK_FALSE(complex_form.real_on_real_chords());
}
