#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "muskat/constants.hpp"
#include "muskat/errors.hpp"
#include "muskat/interface_ops.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

// f_t = -a_rho Lambda f + N1 + N2 (+ N3 in 3D), each piece kept separately.
struct RhsBreakdown {
    SpectralInterface linear;
    SpectralInterface n1, n2, n3;  // n3 is the zero spectrum in 2D
    SpectralInterface total;
};

struct StepperConfig {
    double dt_max = 0.05;
    double cfl_c = 0.25;            // dt <= cfl_c / ||f||_{F^{2,1}}
    double t_start = 0.0;           // nonzero when resuming from a checkpoint
    double t_end = 1.0;
    double mollifier_eps = 0.0;     // 0 = unmollified system
    double blowup_threshold = 1e6;  // on ||f||_{F^{1,1}}
    bool mollified_full_arho = false;  // mollified linear term: a_rho instead of a_rho/2
    bool linear_only = false;          // zero the nonlinear terms (diagnostics)
};

namespace ddetail {

inline void check_finite(const SpectralInterface& s, const char* what, double t) {
    for (const auto& c : s.coef) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw BlowUpDetected(std::string(what) + ": non-finite spectrum", t,
                                 std::numeric_limits<double>::quiet_NaN());
        }
    }
}

inline RhsBreakdown assemble(const SpectralInterface& f, const FluidParams& p,
                             const QuadratureScheme& q, double lin_coef) {
    RhsBreakdown rb;
    rb.linear = (-lin_coef) * apply_lambda(f);
    const SpectralInterface zero(f.dims, f.modes, f.period);
    const PotentialJump pj = solve_potential_jump(f, p, q);
    if (p.a_mu != 0.0) {
        const std::vector<double> D = double_layer(f, pj.omega, q);
        const SpectralInterface Ds = from_grid(D, f.dims, f.modes, f.period);
        rb.n1 = dealias((0.5 * p.a_mu) * apply_lambda(Ds), q.dealias_fraction);
        rb.n3 = f.dims == 2
                    ? dealias(p.a_mu * from_grid(n3_integral(f, D, q), 2, f.modes, f.period),
                              q.dealias_fraction)
                    : zero;
    } else {
        rb.n1 = zero;
        rb.n3 = zero;
    }
    rb.n2 = dealias(from_grid(n2_integral(f, pj, q), f.dims, f.modes, f.period),
                    q.dealias_fraction);
    rb.total = rb.linear + rb.n1 + rb.n2 + rb.n3;
    check_finite(rb.total, "rhs", std::numeric_limits<double>::quiet_NaN());
    return rb;
}

}  // namespace ddetail

inline RhsBreakdown rhs(const SpectralInterface& f, const FluidParams& p,
                        const QuadratureScheme& q = {}) {
    return ddetail::assemble(f, p, q, p.a_rho);
}

// Regularized system: the linear term acts on the doubly mollified profile and
// the nonlinearity is evaluated there and mollified once more. The linear
// coefficient is a_rho/2 as written for the regularized system; full_arho
// switches it to a_rho (see README on this discrepancy).
inline RhsBreakdown mollified_rhs(const SpectralInterface& f, const FluidParams& p, double eps,
                                  const QuadratureScheme& q = {}, bool full_arho = false) {
    if (eps < 0.0) throw InvalidDomain("mollified_rhs: eps must be nonnegative");
    const double c = full_arho ? p.a_rho : 0.5 * p.a_rho;
    const SpectralInterface g = mollify(f, 2.0 * eps);
    RhsBreakdown rb = ddetail::assemble(g, p, q, c);
    rb.n1 = mollify(rb.n1, eps);
    rb.n2 = mollify(rb.n2, eps);
    rb.n3 = mollify(rb.n3, eps);
    rb.total = rb.linear + rb.n1 + rb.n2 + rb.n3;
    return rb;
}

// Symbol of the (possibly mollified) linear part, per coefficient bin.
inline std::vector<double> linear_symbol(const SpectralInterface& f, const FluidParams& p,
                                         const StepperConfig& st) {
    const bool moll = st.mollifier_eps > 0.0;
    const double c = (moll && !st.mollified_full_arho) ? 0.5 * p.a_rho : p.a_rho;
    std::vector<double> lam(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        const double xi = f.xi_abs(i);
        double l = c * xi;
        if (moll) {
            const double pi2 = std::numbers::pi * std::numbers::pi;
            l *= std::exp(-8.0 * pi2 * st.mollifier_eps * xi * xi);
        }
        lam[i] = l;
    }
    return lam;
}

inline SpectralInterface nonlinear_part(const SpectralInterface& f, const FluidParams& p,
                                        const StepperConfig& st, const QuadratureScheme& q) {
    if (st.linear_only) return SpectralInterface(f.dims, f.modes, f.period);
    const RhsBreakdown rb = st.mollifier_eps > 0.0
                                ? mollified_rhs(f, p, st.mollifier_eps, q, st.mollified_full_arho)
                                : rhs(f, p, q);
    return rb.n1 + rb.n2 + rb.n3;
}

inline double cfl_dt(const SpectralInterface& f, const StepperConfig& st, double t) {
    double dt = st.dt_max;
    const double f21 = wiener_norm(f, NormSpec{2.0});
    if (f21 > 0.0) dt = std::min(dt, st.cfl_c / f21);
    return std::min(dt, st.t_end - t);
}

// One integrating-factor RK4 step of size dt. The linear semigroup
// e^{-lambda dt} is applied exactly; the classical RK4 tableau acts on the
// transformed variable. t is the time before the step (error reporting only).
inline SpectralInterface step(const SpectralInterface& f, const FluidParams& p,
                              const StepperConfig& st, const QuadratureScheme& q, double dt,
                              double t = 0.0) {
    const std::vector<double> lam = linear_symbol(f, p, st);
    std::vector<double> E1(lam.size()), Eh(lam.size());
    for (size_t i = 0; i < lam.size(); ++i) {
        E1[i] = std::exp(-lam[i] * dt);
        Eh[i] = std::exp(-lam[i] * dt * 0.5);
    }
    auto scaled = [](const std::vector<double>& e, const SpectralInterface& u) {
        SpectralInterface r = u;
        for (size_t i = 0; i < r.coef.size(); ++i) r.coef[i] *= e[i];
        return r;
    };
    const SpectralInterface N1 = nonlinear_part(f, p, st, q);
    const SpectralInterface u2 = scaled(Eh, f + (0.5 * dt) * N1);
    const SpectralInterface N2 = nonlinear_part(u2, p, st, q);
    const SpectralInterface u3 = scaled(Eh, f) + (0.5 * dt) * N2;
    const SpectralInterface N3 = nonlinear_part(u3, p, st, q);
    const SpectralInterface u4 = scaled(E1, f) + dt * scaled(Eh, N3);
    const SpectralInterface N4 = nonlinear_part(u4, p, st, q);
    SpectralInterface out = scaled(E1, f) +
                            (dt / 6.0) * (scaled(E1, N1) + 2.0 * scaled(Eh, N2 + N3) + N4);
    symmetrize(out);
    const double f11 = wiener_norm(out, NormSpec{1.0});
    if (!std::isfinite(f11) || f11 > st.blowup_threshold)
        throw BlowUpDetected("step: F^{1,1} norm exceeded blowup threshold", t + dt, f11);
    return out;
}

// ---------------------------------------------------------------------------
// Trajectory recording
// ---------------------------------------------------------------------------

// One recorded sample. The named columns are the trajectory CSV schema;
// extras carries additional monitor values that do not enter the CSV.
struct TrajectoryRow {
    double t = 0.0;
    double f11 = 0.0, f21 = 0.0;
    double f11_nu = 0.0, f21_nu = 0.0;
    double l2 = 0.0, h_half = 0.0;
    double energy_E = 0.0;
    double strip_nu_hat = std::numeric_limits<double>::quiet_NaN();
    double omega1_f01 = 0.0, omega3_f01 = 0.0;
    std::string flags = "ok";
    std::map<std::string, double> extras;
};

struct TrajectoryRecord {
    std::vector<TrajectoryRow> rows;
    std::map<std::string, std::string> metadata;
    std::vector<double> snapshot_times;
    std::vector<SpectralInterface> snapshots;
    SpectralInterface final_state;  // kept regardless of keep_spectra
    double final_time = 0.0;
};

struct RecordOptions {
    double nu = 0.0;     // analytic weight rate for the *_nu columns
    double sigma = 0.0;  // coefficient of the accumulated dissipation integral
    int snapshot_stride = 1;
    bool keep_spectra = false;
    std::vector<double> hs_list;  // extra Sobolev monitors, keys "hs_nu_<s>"
    // Optional column hooks; absent hooks leave NaN (strip) or skip (extras).
    std::function<double(const SpectralInterface&, double)> strip_fn;
    std::function<void(const SpectralInterface&, double, TrajectoryRow&)> extra_fn;
};

namespace ddetail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline TrajectoryRow make_row(const SpectralInterface& f, const FluidParams& p,
                              const QuadratureScheme& q, const RecordOptions& opts, double t,
                              double energy_int) {
    TrajectoryRow r;
    r.t = t;
    r.f11 = wiener_norm(f, NormSpec{1.0});
    r.f21 = wiener_norm(f, NormSpec{2.0});
    r.f11_nu = wiener_norm(f, NormSpec{1.0, opts.nu, t});
    r.f21_nu = wiener_norm(f, NormSpec{2.0, opts.nu, t});
    r.l2 = l2_norm(f);
    r.h_half = sobolev_norm(f, NormSpec{0.5, opts.nu, t});
    r.energy_E = r.f11_nu + opts.sigma * energy_int;
    if (opts.strip_fn) r.strip_nu_hat = opts.strip_fn(f, t);
    const PotentialJump pj = solve_potential_jump(f, p, q);
    const VorticityAmplitude w = vorticity(f, pj);
    r.omega1_f01 = wiener_norm(from_grid(w.w1, f.dims, f.modes, f.period), NormSpec{0.0});
    r.omega3_f01 = f.dims == 2
                       ? wiener_norm(from_grid(w.w3, 2, f.modes, f.period), NormSpec{0.0})
                       : 0.0;
    r.extras["l2_nu"] = l2_norm(f, opts.nu, t);
    for (double s : opts.hs_list)
        r.extras["hs_nu_" + g17(s)] = sobolev_norm(f, NormSpec{s, opts.nu, t});
    if (opts.extra_fn) opts.extra_fn(f, t, r);
    return r;
}

}  // namespace ddetail

// Advance f0 to t_end under adaptive CFL stepping, recording every
// snapshot_stride-th step (plus t = 0 and the final time). The dissipation
// integral of energy_E accumulates by per-step trapezoid regardless of the
// record stride. Blow-up ends the record gracefully with a "blowup" row.
inline TrajectoryRecord run(const SpectralInterface& f0, const FluidParams& p,
                            const StepperConfig& st, const QuadratureScheme& q = {},
                            const RecordOptions& opts = {}) {
    TrajectoryRecord rec;
    SpectralInterface f = f0;
    symmetrize(f);
    double t = st.t_start;
    double energy_int = 0.0;
    double last_g = wiener_norm(f, NormSpec{2.0, opts.nu, t});
    rec.metadata["dims"] = std::to_string(f.dims);
    rec.metadata["modes"] = std::to_string(f.modes);
    rec.metadata["period"] = ddetail::g17(f.period);
    rec.metadata["a_mu"] = ddetail::g17(p.a_mu);
    rec.metadata["a_rho"] = ddetail::g17(p.a_rho);
    rec.metadata["nu"] = ddetail::g17(opts.nu);
    rec.metadata["sigma"] = ddetail::g17(opts.sigma);
    rec.metadata["mollifier_eps"] = ddetail::g17(st.mollifier_eps);
    rec.metadata["t_start"] = ddetail::g17(st.t_start);

    auto record = [&]() {
        rec.rows.push_back(ddetail::make_row(f, p, q, opts, t, energy_int));
        if (opts.keep_spectra) {
            rec.snapshot_times.push_back(t);
            rec.snapshots.push_back(f);
        }
    };
    record();

    const double t_eps = 1e-12 * std::max(1.0, st.t_end);
    const int stride = std::max(1, opts.snapshot_stride);
    int step_index = 0;
    while (t < st.t_end - t_eps) {
        const double dt = cfl_dt(f, st, t);
        if (dt <= 0.0) break;
        try {
            f = step(f, p, st, q, dt, t);
        } catch (const BlowUpDetected& b) {
            TrajectoryRow r;
            r.t = b.time;
            r.flags = "blowup";
            r.f11 = b.norm;
            rec.rows.push_back(std::move(r));
            rec.final_state = f;
            rec.final_time = t;
            return rec;
        }
        t += dt;
        ++step_index;
        const double g = wiener_norm(f, NormSpec{2.0, opts.nu, t});
        energy_int += 0.5 * dt * (last_g + g);
        last_g = g;
        if (step_index % stride == 0 || t >= st.t_end - t_eps) record();
    }
    rec.final_state = f;
    rec.final_time = t;
    return rec;
}

} // namespace muskat
