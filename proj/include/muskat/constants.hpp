#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "muskat/errors.hpp"

namespace muskat {

enum class Model { two_d, three_d };

// Atwood-type numbers. a_mu may carry either sign; every ledger formula uses
// |a_mu|. a_rho > 0 is the stable ordering, a_rho < 0 the unstable one.
struct FluidParams {
    double a_mu = 0.0;
    double a_rho = 1.0;
    double nu = 0.0;
};

// ---------------------------------------------------------------------------
// The explicit constant ledger, evaluated at x = ||f||_{F^{1,1}}.
// All entries are rational in (x, |a_mu|) and are only meaningful while the
// listed denominators stay positive; `valid` reports that, and
// `failed_denominator` names the first violated one. C5 blows up like 1/x at
// the origin, so the product c5x = C5 * x is stored instead; every downstream
// use consumes exactly that product.
// ---------------------------------------------------------------------------
struct ConstantLedger {
    double x = 0.0;
    double s1 = 0.0, s2 = 0.0;
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0;
    double c5x = 0.0;
    double b1 = 1.0, b2 = 1.0;
    bool valid = true;
    std::string failed_denominator;
};

inline ConstantLedger ledger(double x, double a_mu) {
    const double a = std::abs(a_mu);
    ConstantLedger L;
    L.x = x;
    auto fail = [&](const char* which) {
        L.valid = false;
        L.failed_denominator = which;
        return L;
    };
    if (x < 0.0) return fail("x >= 0");
    if (!(x < 1.0)) return fail("1 - x^2");
    const double omx2 = 1.0 - x * x;
    L.s1 = x / omx2;
    const double d5 = 1.0 - 5.0 * a * L.s1;
    const double d2 = 1.0 - 2.0 * a * L.s1;
    const double d8 = 1.0 - 8.0 * a * L.s1;
    if (d5 <= 0.0) return fail("1 - 5|a_mu|S1");
    if (d8 <= 0.0) return fail("1 - 8|a_mu|S1");
    if (d2 <= 0.0) return fail("1 - 2|a_mu|S1");
    L.s2 = L.s1 / (1.0 - a * L.s1);
    const double d3 = 1.0 - 3.0 * a * L.s2 * (1.0 + a * L.s2);
    const double d6 = 1.0 - 6.0 * a * L.s2 * (1.0 + a * L.s2);
    if (d3 <= 0.0) return fail("1 - 3|a_mu|S2(1+|a_mu|S2)");
    if (d6 <= 0.0) return fail("1 - 6|a_mu|S2(1+|a_mu|S2)");
    L.c1 = (1.0 - a * L.s1) / d5;
    L.c2 = L.c1 / (d2 * omx2);
    L.c3 = ((1.0 + x * x) / omx2) *
           (1.0 + a * 6.0 * x * (1.0 - a * L.s1) / (omx2 * d2 * d5));
    const double mix = L.c3 + L.c1 + 4.0 * L.s1 * L.c1 * x;
    L.c4 = (1.0 + L.s2 * L.s2 * a * a * mix) / d3;
    L.c5x = L.s2 * (3.0 + a * L.s2 * (3.0 + mix)) / d3;
    L.b1 = d2 / d8;
    L.b2 = (1.0 + 2.0 * L.s2 * L.s2 * a * mix) / d6;
    return L;
}

// ---------------------------------------------------------------------------
// Decay factors sigma. Positive sigma certifies the F^{1,1} energy decay
// d/dt ||f||_{F^{1,1}_nu} <= -sigma ||f||_{F^{2,1}_nu} at norm level x.
// ---------------------------------------------------------------------------

inline double sigma3d(double x, double a_mu, double a_rho, double nu) {
    const double a = std::abs(a_mu);
    const ConstantLedger L = ledger(x, a);
    if (!L.valid)
        throw InvalidDomain("sigma3d: ledger invalid at x=" + std::to_string(x) +
                            " (" + L.failed_denominator + ")");
    const double omx2 = 1.0 - x * x;
    const double t2 = 2.0 * a_rho * a * L.c5x;
    const double t3 = 2.0 * a_rho * x * x * (2.0 * L.b1 + L.b2 - L.b2 * x * x) / (omx2 * omx2);
    const double t4 = a * a_rho * (12.0 * L.c2 * x * x * x + 2.0 * L.c5x * x * x * omx2) /
                      (omx2 * omx2);
    return -nu + a_rho - t2 - t3 - t4;
}

inline double sigma2d(double x, double a_mu, double a_rho, double nu) {
    const double a = std::abs(a_mu);
    if (x < 0.0 || !(x < 1.0))
        throw InvalidDomain("sigma2d: need 0 <= x < 1");
    const double omx2 = 1.0 - x * x;
    const double den = omx2 - 2.0 * a * x;
    if (den <= 0.0)
        throw InvalidDomain("sigma2d: 1 - x^2 - 2|a_mu|x <= 0 at x=" + std::to_string(x));
    const double poly = 2.0 * a * std::pow(x, 5) - 6.0 * std::pow(x, 4) -
                        8.0 * a * std::pow(x, 3) + 4.0 * x * x - 2.0 * a * x + 2.0;
    return a_rho * (1.0 - 2.0 * x * x * (3.0 - x * x) / (omx2 * omx2) -
                    a * 2.0 * x * poly / (omx2 * omx2 * den * den)) -
           nu;
}

inline double sigma(Model model, double x, double a_mu, double a_rho, double nu) {
    return model == Model::three_d ? sigma3d(x, a_mu, a_rho, nu)
                                   : sigma2d(x, a_mu, a_rho, nu);
}

// ---------------------------------------------------------------------------
// Threshold x*(a_mu): the norm level below which sigma stays positive at
// nu = 0, a_rho = 1 (with a valid ledger in 3D). Located as the first sign
// change scanning up from 0, then bisected to 1e-8.
// ---------------------------------------------------------------------------

inline double threshold(double a_mu, Model model) {
    const double tol = 1e-8;
    auto value = [&](double x) -> double {
        // Returns sigma, or -1 once x leaves the validity region: both count
        // as "past the threshold" for the scan.
        try {
            return sigma(model, x, a_mu, 1.0, 0.0);
        } catch (const InvalidDomain&) {
            return -1.0;
        }
    };
    const double scan_step = 1e-3;
    double lo = 0.0;
    double hi = scan_step;
    while (hi < 1.0 && value(hi) > 0.0) {
        lo = hi;
        hi += scan_step;
    }
    if (hi >= 1.0) throw InvalidDomain("threshold: no sign change below x = 1");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct ThresholdSample {
    double a_mu = 0.0;
    double x_star = 0.0;
    double sigma_at_half = 0.0;  // sigma evaluated at x*/2, nu = 0, a_rho = 1
};

inline std::vector<ThresholdSample> threshold_curve(int samples, Model model) {
    if (samples < 2) throw Error("threshold_curve: need at least 2 samples");
    std::vector<ThresholdSample> out;
    out.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        ThresholdSample s;
        s.a_mu = static_cast<double>(i) / (samples - 1);
        s.x_star = threshold(s.a_mu, model);
        s.sigma_at_half = sigma(model, 0.5 * s.x_star, s.a_mu, 1.0, 0.0);
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vorticity / potential-jump amplitude bounds (the a-priori inequalities the
// solver state is checked against). Measured norms that are NaN are skipped,
// which is how the 2D caller omits the components that do not exist there.
// ---------------------------------------------------------------------------

struct BoundCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

struct MeasuredNorms {
    // Vorticity components w_i and double-layer derivatives dD_i in F^{0,1};
    // bounds scale with x:
    double w1_f01 = std::nan("");
    double w2_f01 = std::nan("");
    double w3_f01 = std::nan("");
    double dD1_f01 = std::nan("");
    double dD2_f01 = std::nan("");
    double jump_f11 = std::nan("");  // potential jump Omega in F^{1,1}
    // Same fields one order up; bounds scale with y = ||f||_{F^{2,1}}:
    double w1_f11 = std::nan("");
    double w2_f11 = std::nan("");
    double w3_f11 = std::nan("");
    double dD1_f11 = std::nan("");
    double dD2_f11 = std::nan("");
    double jump_f21 = std::nan("");  // potential jump Omega in F^{2,1}
};

inline std::vector<BoundCheck> vorticity_bounds(const ConstantLedger& L, double a_mu,
                                                double a_rho, double y,
                                                const MeasuredNorms& m) {
    if (!L.valid)
        throw InvalidDomain("vorticity_bounds: ledger invalid (" + L.failed_denominator + ")");
    const double a = std::abs(a_mu);
    const double ar = std::abs(a_rho);
    const double x = L.x;
    std::vector<BoundCheck> out;
    auto push = [&](const char* name, double measured, double bound) {
        if (std::isnan(measured)) return;
        BoundCheck c;
        c.name = name;
        c.measured = measured;
        c.bound = bound;
        c.ratio = bound > 0.0 ? measured / bound : (measured == 0.0 ? 0.0 : HUGE_VAL);
        // Several inequalities are attained with equality at a_mu = 0 (the
        // jump degenerates to -2 a_rho f and C1 = B1 = C4 = B2 = 1), so the
        // two sides are independent floating-point evaluations of the same
        // quantity. Allow rounding slack far below any genuine violation.
        c.pass = c.measured <= c.bound * (1.0 + 1e-9);
        out.push_back(std::move(c));
    };
    push("w1_f01 <= 2 C1 a_rho x", m.w1_f01, 2.0 * L.c1 * ar * x);
    push("w2_f01 <= 2 C1 a_rho x", m.w2_f01, 2.0 * L.c1 * ar * x);
    push("w3_f01 <= 12 |a_mu| a_rho C2 x^3", m.w3_f01, 12.0 * a * ar * L.c2 * x * x * x);
    push("dD1_f01 <= 6 a_rho C2 x^2", m.dD1_f01, 6.0 * ar * L.c2 * x * x);
    push("dD2_f01 <= 6 a_rho C2 x^2", m.dD2_f01, 6.0 * ar * L.c2 * x * x);
    push("Omega_f11 <= 2 a_rho B1 x", m.jump_f11, 2.0 * ar * L.b1 * x);
    push("w1_f11 <= 2 a_rho C4 y", m.w1_f11, 2.0 * ar * L.c4 * y);
    push("w2_f11 <= 2 a_rho C4 y", m.w2_f11, 2.0 * ar * L.c4 * y);
    push("w3_f11 <= 4 |a_mu| a_rho x^2 (C5 + 3 C2) y", m.w3_f11,
         4.0 * a * ar * (x * L.c5x + 3.0 * L.c2 * x * x) * y);
    push("dD1_f11 <= 2 a_rho C5 x y", m.dD1_f11, 2.0 * ar * L.c5x * y);
    push("dD2_f11 <= 2 a_rho C5 x y", m.dD2_f11, 2.0 * ar * L.c5x * y);
    push("Omega_f21 <= 2 a_rho B2 y", m.jump_f21, 2.0 * ar * L.b2 * y);
    return out;
}

} // namespace muskat
