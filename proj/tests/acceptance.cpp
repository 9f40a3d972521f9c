// Acceptance gate: ten numbered criteria, one PASS/FAIL line each.
// Usage: acceptance [A1..A10|all]; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cwkb/complex_wkb.hpp"
#include "cwkb/evaluate.hpp"
#include "cwkb/grids.hpp"
#include "cwkb/oracles.hpp"
#include "cwkb/real_wkb.hpp"
#include "cwkb/states.hpp"
#include "cwkb/threading.hpp"

namespace {

using namespace cwkb;
using clock_type = std::chrono::steady_clock;

struct Criterion {
    bool pass{false};
    std::string detail;                // appended to the verdict line
    std::vector<std::string> notes;    // indented informational lines
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

/* Shared model parameters. */
const Vec2 kGaussX{0.7, -0.4};
const CatParams kCat{1.0, 0.0, 0.0, 2.0};
constexpr double kHbarCubic = 0.1;
constexpr double kCubicL = 0.3;
constexpr double kCubicC = 1.0;

DoubleHamiltonian harmonic_open() {
    const double s = 1.0 / std::sqrt(2.0);
    return {PolynomialHamiltonian({{2, 0, 0.5}, {0, 2, 0.5}}),
            LindbladCoupling{{s, 0.0}, {0.0, s}}};
}

DoubleHamiltonian cubic_open() {
    return {PolynomialHamiltonian({{3, 0, kCubicC}}), LindbladCoupling{{kCubicL, 0.0}, {0.0, 0.0}}};
}

StateModel gaussian_state(const Vec2& X) {
    StateModel s;
    s.type = StateModel::Type::gaussian;
    s.X = X;
    return s;
}

StateModel plane_state(const Vec2& x) {
    StateModel s;
    s.type = StateModel::Type::plane_wave;
    s.X = x;
    return s;
}

StateModel cat_state(const CatParams& cp, CatTerm term) {
    StateModel s;
    s.type = StateModel::Type::cat;
    s.cp = cp;
    s.term = term;
    return s;
}

RunConfig make_cfg(double hbar, PolynomialHamiltonian H, LindbladCoupling L, StateModel st,
                   const char* method) {
    RunConfig c;
    c.hbar = hbar;
    c.hamiltonian = std::move(H);
    c.coupling = L;
    c.state = st;
    c.method = method;
    return c;
}

const std::vector<CatTerm> kBranches{CatTerm::aa, CatTerm::bb, CatTerm::ab, CatTerm::ba};

/* ---- A1: the trajectory method is exact for quadratic open dynamics. ---- */
Criterion run_A1() {
    const auto t0 = clock_type::now();
    const DoubleHamiltonian dh = harmonic_open();
    const QuadraticModel model(Mat2{0.5, 0.0, 0.0, 0.5}, dh.coupling());
    const InitialAction s0 = InitialAction::gaussian(kGaussX);
    auto chi0 = [&](const Vec2& y) { return gaussian_chord0(kGaussX, y, 1.0); };
    const auto axis = make_axis(-3.0, 3.0, 21);

    double max_rel = 0.0;
    for (double t : {0.1, 0.5, 1.0})
        for (double yp : axis)
            for (double yq : axis) {
                const Vec2 y{yp, yq};
                const complexd a = chord_wkb(dh, s0, y, t, 1.0).value;
                const complexd b = exact_quadratic_chord(model, chi0, y, t, 1.0);
                max_rel = std::max(max_rel, std::abs(a - b) / std::abs(b));
            }

    const double secs = seconds_since(t0);
    Criterion c;
    c.pass = max_rel <= 1e-6 && secs <= 60.0;
    c.detail = fmt("trajectory vs closed quadratic evolution, 21x21x3: max_rel=%.3e (tol 1e-6), "
                   "%.1fs single-thread (limit 60s)",
                   max_rel, secs);
    return c;
}

/* ---- A2: exact phase for the cubic pair chord, branch by branch. ---- */
Criterion run_A2() {
    const DoubleHamiltonian dh = cubic_open();
    const auto axis = make_axis(-3.0, 3.0, 21);

    double max_phase = 0.0, max_rel = 0.0;
    for (CatTerm term : kBranches) {
        const CatParams cp = cat_term_params(kCat, term);
        const InitialAction s0 = InitialAction::cat(cp);
        for (double t : {0.2, 1.0})
            for (double yp : axis)
                for (double yq : axis) {
                    const Vec2 y{yp, yq};
                    const complexd wkb = chord_wkb(dh, s0, y, t, kHbarCubic).value;
                    const complexd ex = exact_cubic_cat_chord(cp, kCubicL, y, t, kHbarCubic);
                    // The closed form carries the prefactor den^{-1/2},
                    // den = 1 + 3 i c t y_q; the trajectory value has unit
                    // prefactor, so the exact-phase claim is checked on
                    // ex * den^{1/2}.
                    const complexd den{1.0, 3.0 * kCubicC * t * yq};
                    const complexd ref = ex * std::sqrt(den);
                    max_phase = std::max(max_phase, std::abs(std::arg(wkb * std::conj(ref))));
                    max_rel = std::max(max_rel, std::abs(wkb - ref) / std::abs(ref));
                }
    }

    Criterion c;
    c.pass = max_phase <= 1e-6;
    c.detail = fmt("cubic pair branches, 21x21x2x4: max |dphase mod 2pi|=%.3e (tol 1e-6)",
                   max_phase);
    c.notes.push_back(fmt("unit-prefactor relative error %.3e (phase and magnitude agree)",
                          max_rel));
    return c;
}

/* ---- A3: stationary phase vs direct quadrature vs closed form. ---- */
Criterion run_A3() {
    const auto axis = make_axis(-3.0, 3.0, 21);
    double max_vs_exact = 0.0, max_vs_quad = 0.0, max_sum_abs = 0.0;

    for (CatTerm term : kBranches) {
        const CatParams cp = cat_term_params(kCat, term);
        const auto state = CubicQuadratureState::cat_term(cp);
        // Full grid for the configured cross term; every third node for the
        // other branches (the quadrature oracle dominates the runtime).
        const std::size_t stride = (term == CatTerm::ab) ? 1 : 3;
        for (double t : {0.2, 1.0})
            for (std::size_t i = 0; i < axis.size(); i += stride)
                for (std::size_t j = 0; j < axis.size(); j += stride) {
                    const Vec2 y{axis[i], axis[j]};
                    const complexd ex = exact_cubic_cat_chord(cp, kCubicL, y, t, kHbarCubic);
                    const complexd sp = cubic_saddle_point_chord(cp, kCubicL, y, t, kHbarCubic);
                    const complexd nm = numeric_cubic_chord(state, kCubicL, y, t, kHbarCubic);
                    max_vs_exact = std::max(max_vs_exact, std::abs(sp - ex) / std::abs(ex));
                    max_vs_quad = std::max(max_vs_quad, std::abs(sp - nm) / std::abs(nm));
                }
    }

    // Full-superposition diagnostic on a thinned grid: absolute difference
    // of the weighted four-term sums.
    for (double t : {0.2, 1.0})
        for (std::size_t i = 0; i < axis.size(); i += 3)
            for (std::size_t j = 0; j < axis.size(); j += 3) {
                const Vec2 y{axis[i], axis[j]};
                complexd sum_sp{0.0}, sum_ex{0.0};
                for (CatTerm term : kBranches) {
                    const CatParams cp = cat_term_params(kCat, term);
                    sum_sp += 0.5 * cubic_saddle_point_chord(cp, kCubicL, y, t, kHbarCubic);
                    sum_ex += 0.5 * exact_cubic_cat_chord(cp, kCubicL, y, t, kHbarCubic);
                }
                max_sum_abs = std::max(max_sum_abs, std::abs(sum_sp - sum_ex));
            }

    Criterion c;
    c.pass = max_vs_exact <= 1e-6 && max_vs_quad <= 1e-6;
    c.detail = fmt("stationary phase vs closed form max_rel=%.3e, vs quadrature max_rel=%.3e "
                   "(tol 1e-6)",
                   max_vs_exact, max_vs_quad);
    c.notes.push_back(fmt("full-superposition absolute defect %.3e (diagnostic)", max_sum_abs));
    return c;
}

/* ---- A4: the chord propagator matches its closed form pointwise. ---- */
Criterion run_A4() {
    const DoubleHamiltonian dh = cubic_open();
    ShootingOptions shoot;
    shoot.tolerance = 1e-12;

    std::mt19937 rng(4242u);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::uniform_real_distribution<double> uy(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(0.05, 1.0);

    double max_rel = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Vec2 x{ux(rng), ux(rng)};
        const Vec2 y{uy(rng), uy(rng)};
        const double t = ut(rng);
        const complexd a = mixed_propagator(dh, x, y, t, kHbarCubic, shoot).value;
        const complexd b = exact_cubic_mixed_propagator(x, kCubicL, y, t, kHbarCubic, kCubicC);
        max_rel = std::max(max_rel, std::abs(a - b) / std::abs(b));
    }

    Criterion c;
    c.pass = max_rel <= 1e-10;
    c.detail = fmt("chord propagator vs closed form at 100 random (x, y, t): max_rel=%.3e "
                   "(tol 1e-10)",
                   max_rel);
    return c;
}

/* A5 helpers shared with the convergence probe in A10. */
SupportBox cat_box() {
    const double w = 6.0 * std::sqrt(kHbarCubic);
    return {kCat.P - w, kCat.P + w, kCat.Q - 0.5 * std::abs(kCat.dQ) - w,
            kCat.Q + 0.5 * std::abs(kCat.dQ) + w};
}

double cat_wigner_full(const Vec2& x) {
    return cat_wigner0(kCat, CatTerm::full, x, kHbarCubic).real();
}

complexd cat_exact_full(const Vec2& y, double t) {
    complexd acc{0.0};
    for (CatTerm term : kBranches)
        acc += 0.5 * exact_cubic_cat_chord(cat_term_params(kCat, term), kCubicL, y, t, kHbarCubic);
    return acc;
}

MixedQuadratureOptions a5_options(double steps_per_unit) {
    MixedQuadratureOptions mo;
    mo.abs_tol = 1e-9;
    mo.rel_tol = 1e-9;
    mo.threads = 0;  // results are thread-count independent
    mo.shooting.integration.steps_per_unit = steps_per_unit;
    return mo;
}

/* ---- A5: propagating the Wigner function through the chord propagator
        reproduces the closed evolved chord function. ---- */
Criterion run_A5() {
    const DoubleHamiltonian dh = cubic_open();
    const SupportBox box = cat_box();
    const MixedQuadratureOptions mo = a5_options(50.0);

    std::mt19937 rng(555u);
    std::uniform_real_distribution<double> uy(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(0.05, 1.0);

    double max_rel = 0.0;
    int accepted = 0, draws = 0;
    while (accepted < 50 && draws < 2000) {
        ++draws;
        const Vec2 y{uy(rng), uy(rng)};
        const double t = ut(rng);
        const complexd ex = cat_exact_full(y, t);
        if (std::abs(ex) < 1e-4) continue;  // relative error needs support
        ++accepted;
        const complexd num = propagate_state_via_mixed(dh, cat_wigner_full, box, y, t,
                                                       kHbarCubic, mo);
        max_rel = std::max(max_rel, std::abs(num - ex) / std::abs(ex));
    }

    Criterion c;
    c.pass = accepted == 50 && max_rel <= 1e-6;
    c.detail = fmt("Wigner-integral propagation vs closed form at %d random (y, t) with "
                   "|chi| >= 1e-4 (%d draws): max_rel=%.3e (tol 1e-6)",
                   accepted, draws, max_rel);
    return c;
}

/* ---- A6: every method preserves the trace for every compatible model. ---- */
Criterion run_A6() {
    const double s = 1.0 / std::sqrt(2.0);
    const PolynomialHamiltonian harm({{2, 0, 0.5}, {0, 2, 0.5}});
    const PolynomialHamiltonian cubic({{3, 0, kCubicC}});
    const PolynomialHamiltonian quart({{0, 4, 0.25}});
    const LindbladCoupling amp{{s, 0.0}, {0.0, s}};
    const LindbladCoupling mom{{kCubicL, 0.0}, {0.0, 0.0}};

    std::vector<std::pair<std::string, RunConfig>> combos;
    auto add = [&](const char* label, RunConfig cfg) { combos.emplace_back(label, std::move(cfg)); };
    add("complex_wkb/harmonic-gaussian", make_cfg(1.0, harm, amp, gaussian_state(kGaussX), "complex_wkb"));
    add("complex_wkb/cubic-cat", make_cfg(kHbarCubic, cubic, mom, cat_state(kCat, CatTerm::full), "complex_wkb"));
    add("complex_wkb/quartic-plane", make_cfg(1.0, quart, mom, plane_state({0.4, -0.2}), "complex_wkb"));
    add("real_wkb/cubic-plane", make_cfg(kHbarCubic, cubic, mom, plane_state({0.4, -0.2}), "real_wkb"));
    add("real_wkb/quartic-plane", make_cfg(1.0, quart, mom, plane_state({0.4, -0.2}), "real_wkb"));
    add("mixed_propagator/cubic-plane", make_cfg(kHbarCubic, cubic, mom, plane_state({0.4, -0.2}), "mixed_propagator"));
    add("mixed_propagator/quartic-plane", make_cfg(1.0, quart, mom, plane_state({0.4, -0.2}), "mixed_propagator"));
    add("exact_quadratic/harmonic-gaussian", make_cfg(1.0, harm, amp, gaussian_state(kGaussX), "exact_quadratic"));
    add("exact_cubic/cat", make_cfg(kHbarCubic, cubic, mom, cat_state(kCat, CatTerm::full), "exact_cubic"));
    add("exact_cubic/plane", make_cfg(kHbarCubic, cubic, mom, plane_state({0.4, -0.2}), "exact_cubic"));
    add("saddle_cubic/cat", make_cfg(kHbarCubic, cubic, mom, cat_state(kCat, CatTerm::full), "saddle_cubic"));
    add("quadrature_cubic/cat", make_cfg(kHbarCubic, cubic, mom, cat_state(kCat, CatTerm::full), "quadrature_cubic"));
    add("quadrature_cubic/plane", make_cfg(kHbarCubic, cubic, mom, plane_state({0.4, -0.2}), "quadrature_cubic"));

    double worst = 0.0;
    std::string worst_label = "-";
    for (const auto& [label, cfg] : combos) {
        const auto eval = make_chord_evaluator(cfg);
        const complexd base = eval({0.0, 0.0}, 0.0);
        for (double t : {0.3, 1.0}) {
            const double dev = std::abs(eval({0.0, 0.0}, t) / base - 1.0);
            if (dev > worst) {
                worst = dev;
                worst_label = label;
            }
        }
    }

    Criterion c;
    c.pass = worst <= 1e-10;
    c.detail = fmt("max |chi(0,t)/chi(0,0) - 1| = %.3e over %zu method/model pairs, t in "
                   "{0.3, 1.0} (tol 1e-10; worst: %s)",
                   worst, combos.size(), worst_label.c_str());
    return c;
}

/* ---- A7: power laws of the perturbative phase defect. ---- */
Criterion run_A7() {
    ScalingProbeSetup setup = quartic_scaling_preset();
    setup.y = Vec2{0.0, 1.0};  // the criterion's pinned chord
    const ScalingReport rep = scaling_probe(setup);

    double max_dp = 0.0;
    for (const auto& r : rep.t_rows) max_dp = std::max(max_dp, std::abs(r.dP));
    for (const auto& r : rep.l_rows) max_dp = std::max(max_dp, std::abs(r.dP));

    const bool t_ok = !rep.t_degenerate && std::abs(rep.t_exponent - 3.0) <= 0.2;
    const bool l_ok = !rep.l_degenerate && std::abs(rep.l_exponent - 4.0) <= 0.2;
    const bool d_ok = std::abs(rep.deco_exponent - 1.0) <= 0.1;

    Criterion c;
    c.pass = t_ok && l_ok && d_ok;
    std::string t_txt = rep.t_degenerate ? "undefined (degenerate)" : fmt("%.4f", rep.t_exponent);
    std::string l_txt = rep.l_degenerate ? "undefined (degenerate)" : fmt("%.4f", rep.l_exponent);
    c.detail = fmt("quartic sweep at chord (0, 1): t-exponent %s (want 3.0+-0.2), l-exponent %s "
                   "(want 4.0+-0.2), deco-exponent %.4f (want 1.0+-0.1)",
                   t_txt.c_str(), l_txt.c_str(), rep.deco_exponent);
    if (rep.t_degenerate || rep.l_degenerate) {
        c.notes.push_back(fmt(
            "every sweep point gives |dP| <= %.1e (floor %.0e): the chord (0, 1) keeps both "
            "tips of H = q^4/4 at equal q, so the generator, the phase defect and the Hessian "
            "contraction (%.1e) vanish identically and no power law exists",
            max_dp, rep.degeneracy_floor, rep.estimate_contraction));
        const ScalingReport demo = scaling_probe(quartic_scaling_preset());
        c.notes.push_back(fmt(
            "generic chord (0.2, 1.0): t-exponent %.4f, l-exponent %.4f, deco-exponent %.4f — "
            "the 3/4/1 power laws hold once the chord leaves the degenerate axis",
            demo.t_exponent, demo.l_exponent, demo.deco_exponent));
    }
    return c;
}

/* ---- A8: differential consistency probes of the solved actions. ---- */
Criterion run_A8() {
    const DoubleHamiltonian harm = harmonic_open();
    const DoubleHamiltonian cubic = cubic_open();
    const InitialAction gauss = InitialAction::gaussian(kGaussX);
    const InitialAction cat = InitialAction::cat(kCat);

    std::mt19937 rng(88u);
    std::uniform_real_distribution<double> uy(-2.0, 2.0);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.1, 1.0);

    double max_schwartz = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vec2 y{uy(rng), uy(rng)};
        const double t = ut(rng);
        const auto a = schwartz_probe(harm, gauss, y, t);
        const auto b = schwartz_probe(cubic, cat, y, t);
        max_schwartz = std::max({max_schwartz, a.sym_defect, a.time_defect, b.sym_defect,
                                 b.time_defect});
    }

    double max_grad = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vec2 X{ux(rng), ux(rng)};
        const Vec2 y{uy(rng), uy(rng)};
        const double t = ut(rng);
        max_grad = std::max(max_grad, grad_x_action_probe(cubic, X, y, t));
    }

    double max_hj = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vec2 y{uy(rng), uy(rng)};
        const double t = ut(rng);
        max_hj = std::max({max_hj, hj_residual(harm, gauss, y, t, 1.0),
                           hj_residual(cubic, cat, y, t, kHbarCubic)});
    }

    Criterion c;
    c.pass = max_schwartz <= 1e-5 && max_grad <= 1e-5 && max_hj <= 1e-6;
    c.detail = fmt("mixed-derivative/time defects max=%.3e (tol 1e-5), anchor-gradient probe "
                   "max=%.3e (tol 1e-5), Hamilton-Jacobi residual max=%.3e (tol 1e-6), 20 "
                   "random points each",
                   max_schwartz, max_grad, max_hj);
    return c;
}

/* ---- A9: decoherence of the pair-state interference. ---- */
Criterion run_A9() {
    const std::vector<double> times{0.0, 0.25, 0.5, 1.0};
    const auto yp_axis = make_axis(-20.0, 20.0, 1024);
    const auto yq_axis = make_axis(-3.2, 3.2, 160);

    std::vector<ChordGrid> grids(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        ChordGrid& g = grids[k];
        g.yp_axis = yp_axis;
        g.yq_axis = yq_axis;
        g.hbar = kHbarCubic;
        g.t = times[k];
        g.samples.assign(yp_axis.size() * yq_axis.size(), complexd{0.0});
        const std::size_t nq = yq_axis.size();
        parallel_for(g.samples.size(), 0, [&](std::size_t idx) {
            g.samples[idx] = cat_exact_full({yp_axis[idx / nq], yq_axis[idx % nq]}, times[k]);
        });
    }

    // Purity must not increase along the dissipative evolution.
    std::vector<double> purities;
    for (const auto& g : grids) purities.push_back(purity(g));
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < purities.size(); ++k)
        if (purities[k + 1] > purities[k] + 1e-12) monotone = false;

    // Dominant interference chord at t = 0.5. A plain magnitude cut cannot
    // isolate it: the shear tilts the diagonal lobes into |y_p| > 1 with
    // magnitudes above the fringe lobe, so the fringe is located by its
    // interference excess — |chi| minus the diagonal-pair contribution.
    const ChordGrid& mid = grids[2];
    std::size_t best = 0;
    double best_excess = -1.0;
    for (std::size_t i = 0; i < mid.np(); ++i) {
        if (std::abs(mid.yp_axis[i]) < 1.0) continue;
        for (std::size_t j = 0; j < mid.nq(); ++j) {
            const Vec2 y{mid.yp_axis[i], mid.yq_axis[j]};
            double diag = 0.0;
            for (CatTerm term : {CatTerm::aa, CatTerm::bb})
                diag += 0.5 * std::abs(exact_cubic_cat_chord(cat_term_params(kCat, term),
                                                             kCubicL, y, 0.5, kHbarCubic));
            const double excess = std::abs(mid.at(i, j)) - diag;
            if (excess > best_excess) {
                best_excess = excess;
                best = i * mid.nq() + j;
            }
        }
    }
    const Vec2 y_star{mid.yp_axis[best / mid.nq()], mid.yq_axis[best % mid.nq()]};
    const double measured = std::abs(grids[3].samples[best]) / std::abs(grids[2].samples[best]);
    const double expected =
        std::exp(-(1.0 - 0.5) * kCubicL * kCubicL * y_star.q * y_star.q / (2.0 * kHbarCubic));
    const bool ratio_ok = std::abs(measured / expected - 1.0) <= 0.05;

    Criterion c;
    c.pass = ratio_ok && monotone;
    c.detail = fmt("fringe chord y* = (%.3f, %.3f): |chi(y*,1)|/|chi(y*,0.5)| = %.6f vs "
                   "exp(-dt l^2 y_q*^2 / 2 hbar) = %.6f (within 5%%: %s); purity "
                   "%.8f -> %.8f -> %.8f -> %.8f non-increasing: %s",
                   y_star.p, y_star.q, measured, expected, ratio_ok ? "yes" : "no", purities[0],
                   purities[1], purities[2], purities[3], monotone ? "yes" : "no");

    // Wigner-domain view of the same decay (diagnostic only): amplitude of
    // the fringe peak near the midpoint of the pair. The shear spreads the
    // chord function along y_p as t grows, so the transform uses a wider
    // grid (same sampling density) to keep the boundary below the
    // truncation gate.
    auto fringe_peak = [&](double t) {
        ChordGrid g;
        g.yp_axis = make_axis(-40.0, 40.0, 2048);
        g.yq_axis = yq_axis;
        g.hbar = kHbarCubic;
        g.t = t;
        g.samples.assign(g.yp_axis.size() * g.yq_axis.size(), complexd{0.0});
        const std::size_t nq = g.yq_axis.size();
        parallel_for(g.samples.size(), 0, [&](std::size_t idx) {
            g.samples[idx] = cat_exact_full({g.yp_axis[idx / nq], g.yq_axis[idx % nq]}, t);
        });
        const WignerGrid w = chord_to_wigner(g);
        double peak = 0.0;
        for (std::size_t i = 0; i < w.np(); ++i) {
            if (w.p_axis[i] < 0.4 || w.p_axis[i] > 1.6) continue;
            for (std::size_t j = 0; j < w.nq(); ++j) {
                if (std::abs(w.q_axis[j]) > 0.4) continue;
                peak = std::max(peak, std::abs(w.at(i, j)));
            }
        }
        return peak;
    };
    const double w_ratio = fringe_peak(1.0) / fringe_peak(0.5);
    c.notes.push_back(fmt(
        "Wigner fringe-peak ratio t=1.0/t=0.5 is %.4f (bare-chord estimate %.4f at y*): the "
        "cubic shear feeds the damped chord direction, so the position-space fringes decay "
        "faster than the single-chord formula",
        w_ratio, expected));
    return c;
}

/* ---- A10: step-doubling stability and bitwise determinism. ---- */
Criterion run_A10() {
    ShootingOptions s1, s2;
    s1.integration.steps_per_unit = 1000.0;
    s2.integration.steps_per_unit = 2000.0;
    s1.tolerance = s2.tolerance = 1e-12;

    double max_step = 0.0;
    {  // A1 representative: harmonic open-system chord value
        const DoubleHamiltonian dh = harmonic_open();
        const InitialAction s0 = InitialAction::gaussian(kGaussX);
        const Vec2 y{1.2, -0.9};
        max_step = std::max(max_step, std::abs(chord_wkb(dh, s0, y, 1.0, 1.0, s1).value -
                                               chord_wkb(dh, s0, y, 1.0, 1.0, s2).value));
    }
    const DoubleHamiltonian cubic = cubic_open();
    {  // A2 representative: cubic pair branch value
        const InitialAction s0 = InitialAction::cat(kCat);
        const Vec2 y{2.1, 1.5};
        max_step = std::max(max_step, std::abs(chord_wkb(cubic, s0, y, 1.0, kHbarCubic, s1).value -
                                               chord_wkb(cubic, s0, y, 1.0, kHbarCubic, s2).value));
    }
    {  // A3 representative: closed forms carry no integrator steps
        const complexd a = cubic_saddle_point_chord(kCat, kCubicL, {1.1, -0.7}, 0.8, kHbarCubic);
        const complexd b = cubic_saddle_point_chord(kCat, kCubicL, {1.1, -0.7}, 0.8, kHbarCubic);
        max_step = std::max(max_step, std::abs(a - b));
    }
    {  // A4 representative: chord propagator value
        const Vec2 x{0.8, -0.3}, y{1.5, 2.0};
        max_step = std::max(max_step, std::abs(mixed_propagator(cubic, x, y, 0.7, kHbarCubic, s1).value -
                                               mixed_propagator(cubic, x, y, 0.7, kHbarCubic, s2).value));
    }
    {  // A5 representative: one propagated-state chord, step count doubled
        const SupportBox box = cat_box();
        const complexd a = propagate_state_via_mixed(cubic, cat_wigner_full, box, {-1.9, 0.4},
                                                     0.4, kHbarCubic, a5_options(50.0));
        const complexd b = propagate_state_via_mixed(cubic, cat_wigner_full, box, {-1.9, 0.4},
                                                     0.4, kHbarCubic, a5_options(100.0));
        max_step = std::max(max_step, std::abs(a - b));
    }

    // Bitwise determinism: the trajectory method evaluated on a grid must
    // not depend on the worker count, rerun, or output pass.
    RunConfig cfg = make_cfg(1.0, PolynomialHamiltonian({{2, 0, 0.5}, {0, 2, 0.5}}),
                             harmonic_open().coupling(), gaussian_state(kGaussX), "complex_wkb");
    cfg.grid.extent_p = cfg.grid.extent_q = 3.0;
    cfg.grid.n_p = cfg.grid.n_q = 9;
    cfg.threads = 1;
    const ChordGrid g1 = evaluate_grid(cfg, 0.7);
    cfg.threads = 8;
    const ChordGrid g8 = evaluate_grid(cfg, 0.7);
    const ChordGrid g8b = evaluate_grid(cfg, 0.7);
    bool bitwise = g1.samples.size() == g8.samples.size();
    for (std::size_t i = 0; bitwise && i < g1.samples.size(); ++i)
        bitwise = g1.samples[i] == g8.samples[i] && g8.samples[i] == g8b.samples[i];

    auto slurp = [](const char* p) {
        std::ifstream is(p);
        std::ostringstream buf;
        buf << is.rdbuf();
        return buf.str();
    };
    write_grid(g1, "acc_det_a.json", "json", metadata_json(cfg));
    write_grid(g8, "acc_det_b.json", "json", metadata_json(cfg));
    const bool files_equal = slurp("acc_det_a.json") == slurp("acc_det_b.json");
    std::remove("acc_det_a.json");
    std::remove("acc_det_b.json");

    Criterion c;
    c.pass = max_step < 1e-8 && bitwise && files_equal;
    c.detail = fmt("step doubling moves the A1-A5 representative values by max %.3e (tol 1e-8); "
                   "grids bitwise identical across 1/8 workers and reruns: %s; serialised "
                   "outputs byte-identical: %s",
                   max_step, bitwise ? "yes" : "no", files_equal ? "yes" : "no");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string selector = argc > 1 ? argv[1] : "all";
    struct Entry {
        const char* name;
        Criterion (*fn)();
    };
    const Entry entries[] = {{"A1", run_A1}, {"A2", run_A2}, {"A3", run_A3}, {"A4", run_A4},
                             {"A5", run_A5}, {"A6", run_A6}, {"A7", run_A7}, {"A8", run_A8},
                             {"A9", run_A9}, {"A10", run_A10}};

    int failures = 0;
    bool matched = false;
    for (const Entry& e : entries) {
        if (selector != "all" && selector != e.name) continue;
        matched = true;
        Criterion c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail = std::string("unexpected exception: ") + ex.what();
        }
        std::printf("%s %s — %s\n", e.name, c.pass ? "PASS" : "FAIL", c.detail.c_str());
        for (const std::string& n : c.notes) std::printf("    note: %s\n", n.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }

    if (!matched) {
        std::fprintf(stderr, "unknown selector '%s' (expected A1..A10 or all)\n", selector.c_str());
        return 64;
    }
    return failures;
}
