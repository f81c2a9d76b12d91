#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "muskat/constants.hpp"
#include "muskat/dynamics.hpp"
#include "muskat/errors.hpp"
#include "muskat/interface_ops.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

struct Verdict {
    std::string name;
    bool pass = true;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    std::string note;
};

namespace edetail {

constexpr double kMonoTol = 1e-6;

struct MonoStat {
    bool pass = true;
    double worst = 0.0;  // max consecutive ratio v[i+1]/v[i]
};

inline MonoStat monotone_within(const std::vector<double>& v, double tol = kMonoTol) {
    MonoStat m;
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = v[i], b = v[i + 1];
        if (!(b <= a * (1.0 + tol))) m.pass = false;
        const double r = a > 0.0 ? b / a
                                 : (b <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        m.worst = std::max(m.worst, r);
    }
    return m;
}

struct LinFit {
    double slope = 0.0, intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 1.0;
    int n = 0;
};

inline LinFit linfit(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit f;
    f.n = static_cast<int>(x.size());
    if (f.n < 2) throw EmptyWindow("linfit: need at least 2 samples");
    double sx = 0, sy = 0;
    for (int i = 0; i < f.n; ++i) {
        sx += x[static_cast<size_t>(i)];
        sy += y[static_cast<size_t>(i)];
    }
    const double mx = sx / f.n, my = sy / f.n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < f.n; ++i) {
        const double dx = x[static_cast<size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (y[static_cast<size_t>(i)] - my);
    }
    if (sxx == 0.0) throw EmptyWindow("linfit: degenerate abscissa");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0, sst = 0;
    for (int i = 0; i < f.n; ++i) {
        const double e = y[static_cast<size_t>(i)] -
                         (f.intercept + f.slope * x[static_cast<size_t>(i)]);
        sse += e * e;
        const double d = y[static_cast<size_t>(i)] - my;
        sst += d * d;
    }
    f.slope_stderr = f.n > 2 ? std::sqrt(sse / (f.n - 2) / sxx) : 0.0;
    f.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
    return f;
}

inline std::vector<const TrajectoryRow*> ok_rows(const TrajectoryRecord& rec) {
    std::vector<const TrajectoryRow*> out;
    for (const auto& r : rec.rows)
        if (r.flags == "ok") out.push_back(&r);
    return out;
}

}  // namespace edetail

// ---------------------------------------------------------------------------
// Trajectory monitors (pure functions of a record)
// ---------------------------------------------------------------------------

struct MonitorResult {
    Verdict verdict;
    std::vector<double> t;
    std::vector<double> series;
};

// E(t) = ||f||_{F^{1,1}_nu}(t) + sigma * int_0^t ||f||_{F^{2,1}_nu} dtau.
// Uses the recorded energy_E column when finite; otherwise rebuilds the
// integral by trapezoid over the recorded rows from f11_nu and f21_nu.
inline MonitorResult energy_monitor(const TrajectoryRecord& rec, double sigma, double nu) {
    MonitorResult res;
    const auto rows = edetail::ok_rows(rec);
    bool have_col = !rows.empty();
    for (const auto* r : rows)
        if (!std::isfinite(r->energy_E)) have_col = false;
    double acc = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        res.t.push_back(rows[i]->t);
        if (have_col) {
            res.series.push_back(rows[i]->energy_E);
        } else {
            if (i > 0)
                acc += 0.5 * (rows[i]->t - rows[i - 1]->t) *
                       (rows[i - 1]->f21_nu + rows[i]->f21_nu);
            res.series.push_back(rows[i]->f11_nu + sigma * acc);
        }
    }
    const auto m = edetail::monotone_within(res.series);
    res.verdict = {"energy_monotone", m.pass, m.worst, 1.0 + edetail::kMonoTol,
                   edetail::kMonoTol, ""};
    auto it = rec.metadata.find("nu");
    if (it != rec.metadata.end()) {
        const double rec_nu = std::strtod(it->second.c_str(), nullptr);
        if (std::abs(rec_nu - nu) > 1e-12 * std::max(1.0, std::abs(nu)))
            res.verdict.note = "nu argument differs from the recorded nu";
    }
    return res;
}

inline Verdict l2_monitor(const TrajectoryRecord& rec) {
    std::vector<double> v;
    for (const auto* r : edetail::ok_rows(rec)) v.push_back(r->l2);
    const auto m = edetail::monotone_within(v);
    return {"l2_monotone", m.pass, m.worst, 1.0 + edetail::kMonoTol, edetail::kMonoTol, ""};
}

// Nonincreasing Hdot^s_nu plus the weighted-L2 cap ||f||_{L2_nu}(t) <=
// ||f0||_{L2} * exp_margin. s = 1/2 reads the h_half column; other s read
// the "hs_nu_<s>" extras recorded via RecordOptions::hs_list.
inline Verdict hs_nu_monitor(const TrajectoryRecord& rec, double s, double exp_margin = 2.0) {
    const auto rows = edetail::ok_rows(rec);
    std::vector<double> v;
    for (const auto* r : rows) {
        if (s == 0.5) {
            v.push_back(r->h_half);
        } else {
            const std::string key = "hs_nu_" + ddetail::g17(s);
            auto it = r->extras.find(key);
            if (it == r->extras.end())
                throw Error("hs_nu_monitor: series " + key + " was not recorded");
            v.push_back(it->second);
        }
    }
    const auto m = edetail::monotone_within(v);
    Verdict out{"hs_nu_monotone_s=" + ddetail::g17(s), m.pass, m.worst,
                1.0 + edetail::kMonoTol, edetail::kMonoTol, ""};
    if (!rows.empty()) {
        const double cap = rows.front()->l2 * exp_margin;
        double worst = 0.0;
        bool have = true;
        for (const auto* r : rows) {
            auto it = r->extras.find("l2_nu");
            if (it == r->extras.end()) {
                have = false;
                break;
            }
            worst = std::max(worst, it->second);
        }
        if (have && worst > cap) {
            out.pass = false;
            out.note = "weighted L2 exceeded " + ddetail::g17(cap);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contraction of the F^{0,1} distance between two co-evolved solutions
// ---------------------------------------------------------------------------

struct ContractionResult {
    std::vector<double> t;
    std::vector<double> dist;
    Verdict verdict;
};

inline ContractionResult contraction_monitor(const SpectralInterface& f0,
                                             const SpectralInterface& g0, const FluidParams& p,
                                             const StepperConfig& st,
                                             const QuadratureScheme& q = {}) {
    require_same_grid(f0, g0);
    ContractionResult res;
    SpectralInterface f = f0, g = g0;
    symmetrize(f);
    symmetrize(g);
    double t = st.t_start;
    auto push = [&]() {
        res.t.push_back(t);
        res.dist.push_back(wiener_norm(f - g, NormSpec{0.0}));
    };
    push();
    const double t_eps = 1e-12 * std::max(1.0, st.t_end);
    while (t < st.t_end - t_eps) {
        const double dt = std::min(cfl_dt(f, st, t), cfl_dt(g, st, t));
        if (dt <= 0.0) break;
        f = step(f, p, st, q, dt, t);
        g = step(g, p, st, q, dt, t);
        t += dt;
        push();
    }
    const auto m = edetail::monotone_within(res.dist);
    res.verdict = {"contraction_monotone", m.pass, m.worst, 1.0 + edetail::kMonoTol,
                   edetail::kMonoTol, ""};
    return res;
}

// ---------------------------------------------------------------------------
// Log-log decay fit
// ---------------------------------------------------------------------------

struct DecayFit {
    double t1 = 0.0, t2 = 0.0;
    double exponent = 0.0;
    double stderr_ = 0.0;
    double r_squared = 0.0;
    int samples = 0;
};

inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double t1,
                          double t2) {
    if (t.size() != y.size()) throw GridMismatch("fit_decay: length mismatch");
    if (!(t2 > t1)) throw EmptyWindow("fit_decay: window must satisfy t2 > t1");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t1 && t[i] <= t2 && y[i] > 0.0) {
            lx.push_back(std::log(t[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 10)
        throw EmptyWindow("fit_decay: fewer than 10 positive samples in window");
    const auto f = edetail::linfit(lx, ly);
    DecayFit out;
    out.t1 = t1;
    out.t2 = t2;
    out.exponent = f.slope;
    out.stderr_ = f.slope_stderr;
    out.r_squared = f.r_squared;
    out.samples = f.n;
    return out;
}

// ---------------------------------------------------------------------------
// Analyticity-strip estimate
//
// Shell maxima a_r = max_{|k| in shell r} |fhat(k)| are fitted to
//   -log a_r = b0 + nu_hat_t * xi_r + c * log xi_r,
// xi_r = 2 pi r / L. The log regressor absorbs algebraic prefactors that
// otherwise bias the exponential slope; the returned value is the xi
// coefficient, the analyticity band width nu*t.
// ---------------------------------------------------------------------------

inline double strip_estimate(const SpectralInterface& f, double floor = 1e-13) {
    std::map<int, double> shell;
    for (size_t i = 0; i < f.size(); ++i) {
        int r;
        if (f.dims == 1) {
            r = std::abs(f.wavenumber(static_cast<int>(i)));
        } else {
            const int k1 = f.wavenumber(static_cast<int>(i) / f.modes);
            const int k2 = f.wavenumber(static_cast<int>(i) % f.modes);
            r = static_cast<int>(std::lround(
                std::hypot(static_cast<double>(k1), static_cast<double>(k2))));
        }
        if (r == 0) continue;
        double& m = shell[r];
        m = std::max(m, std::abs(f.coef[i]));
    }
    std::vector<double> xs, ls, ys;
    for (const auto& [r, a] : shell) {
        if (a <= floor) continue;
        const double xi = 2.0 * std::numbers::pi * r / f.period;
        xs.push_back(xi);
        ls.push_back(std::log(xi));
        ys.push_back(-std::log(a));
    }
    if (xs.size() < 8)
        throw InsufficientDecades("strip_estimate: fewer than 8 shells above floor",
                                  static_cast<int>(xs.size()));
    // normal equations for [xi, log xi, 1]
    double a11 = 0, a12 = 0, a13 = 0, a22 = 0, a23 = 0, a33 = 0, b1 = 0, b2 = 0, b3 = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        a11 += xs[i] * xs[i];
        a12 += xs[i] * ls[i];
        a13 += xs[i];
        a22 += ls[i] * ls[i];
        a23 += ls[i];
        b1 += xs[i] * ys[i];
        b2 += ls[i] * ys[i];
        b3 += ys[i];
    }
    a33 = static_cast<double>(xs.size());
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (det == 0.0) throw Error("strip_estimate: singular normal equations");
    const double det1 = b1 * (a22 * a33 - a23 * a23) - a12 * (b2 * a33 - a23 * b3) +
                        a13 * (b2 * a23 - a22 * b3);
    return det1 / det;
}

inline double strip_estimate_or_nan(const SpectralInterface& f) noexcept {
    try {
        return strip_estimate(f);
    } catch (...) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// ---------------------------------------------------------------------------
// Time-reversal ill-posedness
// ---------------------------------------------------------------------------

struct ReversalReport {
    double delta = 0.0;
    double recovery_f01 = std::numeric_limits<double>::quiet_NaN();
    double growth_h1 = std::numeric_limits<double>::quiet_NaN();
    double growth_h2 = std::numeric_limits<double>::quiet_NaN();
    int modes_checked = 0;
    double max_rate_rel_err = std::numeric_limits<double>::quiet_NaN();
    bool blew_up = false;
    TrajectoryRecord forward;
    TrajectoryRecord reversed;
};

// Stable forward to t = delta, then a_rho -> -a_rho forward for delta: the
// reversed leg solves the unstable-regime equation and must undo the first.
inline ReversalReport time_reversal_illposedness(const SpectralInterface& f0,
                                                 const FluidParams& p,
                                                 const StepperConfig& st_in,
                                                 const QuadratureScheme& q, double delta) {
    if (delta <= 0.0) throw InvalidDomain("time_reversal: delta must be positive");
    ReversalReport rep;
    rep.delta = delta;
    StepperConfig st = st_in;
    st.t_end = delta;
    RecordOptions opts;
    rep.forward = run(f0, p, st, q, opts);
    if (rep.forward.rows.back().flags != "ok") {
        rep.blew_up = true;
        return rep;
    }
    const SpectralInterface f_mid = rep.forward.final_state;
    FluidParams pr = p;
    pr.a_rho = -p.a_rho;
    rep.reversed = run(f_mid, pr, st, q, opts);
    if (rep.reversed.rows.back().flags != "ok") {
        rep.blew_up = true;
        return rep;
    }
    const SpectralInterface f_end = rep.reversed.final_state;
    SpectralInterface f0s = f0;
    symmetrize(f0s);
    rep.recovery_f01 = wiener_norm(f_end - f0s, NormSpec{0.0});
    const double h1_mid = sobolev_norm(f_mid, NormSpec{1.0});
    const double h2_mid = sobolev_norm(f_mid, NormSpec{2.0});
    rep.growth_h1 = h1_mid > 0.0 ? sobolev_norm(f_end, NormSpec{1.0}) / h1_mid
                                 : std::numeric_limits<double>::quiet_NaN();
    rep.growth_h2 = h2_mid > 0.0 ? sobolev_norm(f_end, NormSpec{2.0}) / h2_mid
                                 : std::numeric_limits<double>::quiet_NaN();
    if (f0.dims == 1) {
        // per-mode growth over the reversed leg against the linear rate a_rho |xi_k|
        double worst = 0.0;
        int checked = 0;
        for (int k = 1; k <= f0.modes / 8; ++k) {
            const double a0 = std::abs(f_mid.at(k));
            const double a1 = std::abs(f_end.at(k));
            if (a0 < 1e-14 || a1 <= 0.0) continue;
            const double rate = std::log(a1 / a0) / delta;
            const double lin = std::abs(p.a_rho) * 2.0 * std::numbers::pi * k / f0.period;
            worst = std::max(worst, std::abs(rate - lin) / lin);
            ++checked;
        }
        rep.modes_checked = checked;
        rep.max_rate_rel_err = worst;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Staircase counterexample (pure series arithmetic)
//
// Radial shells r in [n^delta, n^delta + n^-gamma] carrying r|fhat(r)| = n^sigma.
// Shell contributions (planar frequency measure):
//   F^{1,1}: 2 pi (n^{sigma+delta-gamma} + n^{sigma-2 gamma}/2)
//   Hdot^s:  (pi/s) n^{2 sigma + 2 s delta} expm1(2s log1p(n^{-gamma-delta}))
//   L^2:     2 pi n^{2 sigma} log1p(n^{-gamma-delta})
// written in cancellation-free form; the naive (lo+w)^p - lo^p differences
// underflow to zero beyond a few thousand shells.
// ---------------------------------------------------------------------------

struct StaircaseSpec {
    double sigma_exp;
    double delta_exp;
    double gamma_exp;
    double s_target;
    long long n_shells;

    StaircaseSpec(double sig, double del, double gam, double s, long long n = 1000000)
        : sigma_exp(sig), delta_exp(del), gamma_exp(gam), s_target(s), n_shells(n) {
        if (!(del > 0.0) || !(gam > 0.0) || !(s > 0.0))
            throw ConstraintViolated("staircase: delta, gamma, s must be positive");
        if (n < 1000) throw ConstraintViolated("staircase: need at least 1000 shells");
        if (!(sig + del - gam < -1.0))
            throw ConstraintViolated("staircase: sigma + delta - gamma < -1 fails");
        if (std::abs(2.0 * sig + del * (2.0 * s - 1.0) - gam + 1.0) > 1e-12)
            throw ConstraintViolated("staircase: 2 sigma + delta (2s - 1) - gamma = -1 fails");
    }
};

struct StaircaseReport {
    double f11_at_1e3 = 0.0, f11_at_end = 0.0;
    double f11_total_est = 0.0;     // partial sum + analytic p-series tail bound
    double f11_tail_fraction = 0.0; // mass beyond 1e3 shells relative to the total
    double l2_at_1e3 = 0.0, l2_at_end = 0.0;
    double hs_at_1e3 = 0.0, hs_at_end = 0.0;
    double hs_growth = 0.0;       // hs_at_end - hs_at_1e3
    double hs_growth_floor = 0.0; // 0.9 * 2 pi * ln(n_shells / 1e3)
    bool f11_tail_small = false;  // tail fraction < 1e-6
    bool hs_divergent = false;    // growth >= floor
};

inline StaircaseReport staircase(const StaircaseSpec& sp) {
    StaircaseReport rep;
    const double sig = sp.sigma_exp, del = sp.delta_exp, gam = sp.gamma_exp, s = sp.s_target;
    const double pi = std::numbers::pi;
    double f11 = 0.0, hs = 0.0, l2 = 0.0;
    for (long long n = 1; n <= sp.n_shells; ++n) {
        const double nd = static_cast<double>(n);
        const double winlo = std::pow(nd, -gam - del);  // w / lo
        f11 += 2.0 * pi * (std::pow(nd, sig + del - gam) + 0.5 * std::pow(nd, sig - 2.0 * gam));
        hs += pi / s * std::pow(nd, 2.0 * sig + 2.0 * s * del) *
              std::expm1(2.0 * s * std::log1p(winlo));
        l2 += 2.0 * pi * std::pow(nd, 2.0 * sig) * std::log1p(winlo);
        if (n == 1000) {
            rep.f11_at_1e3 = f11;
            rep.hs_at_1e3 = hs;
            rep.l2_at_1e3 = l2;
        }
    }
    rep.f11_at_end = f11;
    rep.hs_at_end = hs;
    rep.l2_at_end = l2;
    // dominant F^{1,1} tail beyond the last computed shell: 2 pi n^p, p < -1
    const double p = sig + del - gam;
    const double nd = static_cast<double>(sp.n_shells);
    rep.f11_total_est = f11 + 2.0 * pi * std::pow(nd, p + 1.0) / (-p - 1.0);
    rep.f11_tail_fraction = (rep.f11_total_est - rep.f11_at_1e3) / rep.f11_total_est;
    rep.f11_tail_small = rep.f11_tail_fraction < 1e-6;
    rep.hs_growth = rep.hs_at_end - rep.hs_at_1e3;
    rep.hs_growth_floor = 0.9 * 2.0 * pi * std::log(nd / 1000.0);
    rep.hs_divergent = rep.hs_growth >= rep.hs_growth_floor;
    return rep;
}

// ---------------------------------------------------------------------------
// Mollifier Cauchy rate
// ---------------------------------------------------------------------------

struct MollifierReport {
    std::vector<double> eps;   // pair anchors: run(eps) vs run(eps * ratio)
    std::vector<double> dist;  // F^{0,1} distance at t_end
    double slope = 0.0;        // log dist vs log eps
    bool monotone = false;
};

// Runs each eps in eps_list plus the trailing eps*ratio; initial data are
// mollified per run (f^eps(0) = zeta_eps * f0).
inline MollifierReport mollifier_cauchy_rate(const SpectralInterface& f0, const FluidParams& p,
                                             const StepperConfig& st_in,
                                             const QuadratureScheme& q,
                                             const std::vector<double>& eps_list) {
    if (eps_list.size() < 3)
        throw InvalidDomain("mollifier_cauchy_rate: need at least 3 eps values");
    const double ratio = eps_list[1] / eps_list[0];
    if (!(ratio > 0.0 && ratio < 1.0))
        throw InvalidDomain("mollifier_cauchy_rate: eps_list must decrease geometrically");
    for (size_t i = 0; i + 1 < eps_list.size(); ++i) {
        if (std::abs(eps_list[i + 1] / eps_list[i] - ratio) > 1e-9 * ratio)
            throw InvalidDomain("mollifier_cauchy_rate: eps_list must be geometric");
    }
    std::vector<double> all_eps = eps_list;
    all_eps.push_back(eps_list.back() * ratio);
    std::vector<SpectralInterface> finals;
    for (double e : all_eps) {
        StepperConfig st = st_in;
        st.mollifier_eps = e;
        const TrajectoryRecord rec = run(mollify(f0, e), p, st, q, {});
        if (rec.rows.back().flags != "ok")
            throw BlowUpDetected("mollifier_cauchy_rate: run blew up",
                                 rec.rows.back().t, rec.rows.back().f11);
        finals.push_back(rec.final_state);
    }
    MollifierReport rep;
    std::vector<double> lx, ly;
    for (size_t i = 0; i + 1 < finals.size(); ++i) {
        const double d = wiener_norm(finals[i] - finals[i + 1], NormSpec{0.0});
        rep.eps.push_back(all_eps[i]);
        rep.dist.push_back(d);
        if (d > 0.0) {
            lx.push_back(std::log(all_eps[i]));
            ly.push_back(std::log(d));
        }
    }
    rep.monotone = true;
    for (size_t i = 0; i + 1 < rep.dist.size(); ++i)
        if (rep.dist[i + 1] > rep.dist[i]) rep.monotone = false;
    if (lx.size() >= 2) rep.slope = edetail::linfit(lx, ly).slope;
    return rep;
}

// ---------------------------------------------------------------------------
// Proven-inequality measurements (vorticity / potential-jump bounds)
// ---------------------------------------------------------------------------

inline MeasuredNorms measure_norms(const SpectralInterface& f, const FluidParams& p,
                                   const QuadratureScheme& q = {}) {
    MeasuredNorms m;
    const PotentialJump pj = solve_potential_jump(f, p, q);
    const SpectralInterface Om = from_grid(pj.omega, f.dims, f.modes, f.period);
    m.jump_f11 = wiener_norm(Om, NormSpec{1.0});
    m.jump_f21 = wiener_norm(Om, NormSpec{2.0});
    const VorticityAmplitude w = vorticity(f, pj);
    auto f01 = [&](const std::vector<double>& v) {
        return wiener_norm(from_grid(v, f.dims, f.modes, f.period), NormSpec{0.0});
    };
    auto f11 = [&](const std::vector<double>& v) {
        return wiener_norm(from_grid(v, f.dims, f.modes, f.period), NormSpec{1.0});
    };
    m.w1_f01 = f01(w.w1);
    m.w1_f11 = f11(w.w1);
    if (f.dims == 2) {
        m.w2_f01 = f01(w.w2);
        m.w2_f11 = f11(w.w2);
        m.w3_f01 = f01(w.w3);
        m.w3_f11 = f11(w.w3);
    }
    const std::vector<double> D = double_layer(f, pj.omega, q);
    const SpectralInterface Ds = from_grid(D, f.dims, f.modes, f.period);
    const SpectralInterface dD1 = derivative(Ds, 0);
    m.dD1_f01 = wiener_norm(dD1, NormSpec{0.0});
    m.dD1_f11 = wiener_norm(dD1, NormSpec{1.0});
    if (f.dims == 2) {
        const SpectralInterface dD2 = derivative(Ds, 1);
        m.dD2_f01 = wiener_norm(dD2, NormSpec{0.0});
        m.dD2_f11 = wiener_norm(dD2, NormSpec{1.0});
    }
    return m;
}

inline std::vector<BoundCheck> proven_bounds(const SpectralInterface& f, const FluidParams& p,
                                             const QuadratureScheme& q = {}) {
    const double x = wiener_norm(f, NormSpec{1.0});
    const double y = wiener_norm(f, NormSpec{2.0});
    return vorticity_bounds(ledger(x, p.a_mu), p.a_mu, p.a_rho, y, measure_norms(f, p, q));
}

// ---------------------------------------------------------------------------
// Deterministic initial data
// ---------------------------------------------------------------------------

namespace profiles {

inline double golden_phase(int m) {
    const double frac = std::fmod(m * 0.61803398874989484, 1.0);
    return 2.0 * std::numbers::pi * frac;
}

// Pure cosine of sup amplitude `amplitude` on the k0 (1D) or diagonal
// (k0, k0) (2D) wave. Both conjugate bins are set explicitly: symmetrize
// averages a bin with the conjugate of its mirror, so seeding one side
// only would halve the coefficient.
inline SpectralInterface cosine(int dims, int n, double period, double amplitude, int k0 = 1) {
    SpectralInterface f(dims, n, period);
    if (dims == 1) {
        f.at(k0) = 0.5 * amplitude;
        f.at(-k0) = 0.5 * amplitude;
    } else {
        f.at(k0, k0) = 0.5 * amplitude;
        f.at(-k0, -k0) = 0.5 * amplitude;
    }
    symmetrize(f);
    return f;
}

// Two-mode profile with an irrational relative phase; scaled by the caller.
inline SpectralInterface two_cosine(int dims, int n, double period) {
    SpectralInterface f(dims, n, period);
    const std::complex<double> ph = std::polar(1.0, 0.7);
    if (dims == 1) {
        f.at(1) = 0.5;
        f.at(2) = 0.25 * ph;
    } else {
        f.at(1, 1) = 0.25;
        f.at(2, 1) = 0.125 * ph;
    }
    symmetrize(f);
    return f;
}

// Band-limited data with a bump at k = n/4 (2D). Amplitudes e^{-decay k},
// golden-ratio phases; the bump drives the Hdot^2 inflation of the reversal
// experiment.
inline SpectralInterface band_with_bump(int n, double period, double decay = 0.15,
                                        double bump = 0.5) {
    SpectralInterface f(1, n, period);
    const int kmax = n / 4;
    for (int m = 1; m <= kmax; ++m) {
        double a = std::exp(-decay * m);
        if (m == kmax) a += bump;
        f.at(m) = std::polar(a, golden_phase(m));
    }
    symmetrize(f);
    return f;
}

// Low-frequency power-law data |xi|^{-1/2} e^{-xi^2/2} for the decay runs (2D).
inline SpectralInterface powerlaw(int n, double period) {
    SpectralInterface f(1, n, period);
    for (int m = 1; m < n / 2; ++m) {
        const double xi = 2.0 * std::numbers::pi * m / period;
        const double a = std::pow(xi, -0.5) * std::exp(-0.5 * xi * xi);
        f.at(m) = std::polar(a, golden_phase(m));
    }
    symmetrize(f);
    return f;
}

inline SpectralInterface scaled_to_f11(SpectralInterface f, double target) {
    const double cur = wiener_norm(f, NormSpec{1.0});
    if (cur == 0.0) throw InvalidDomain("scaled_to_f11: zero profile");
    return (target / cur) * f;
}

inline SpectralInterface scaled_to_sup(SpectralInterface f, double amplitude) {
    const std::vector<double> g = to_grid(f);
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    if (m == 0.0) throw InvalidDomain("scaled_to_sup: zero profile");
    return (amplitude / m) * f;
}

}  // namespace profiles

// nu for analytic-weighted monitors: a fixed fraction of the net decay
// margin at the initial size, zero outside the threshold.
inline double choose_nu(Model model, double x0, double a_mu, double a_rho,
                        double fraction = 0.1) {
    try {
        const double s0 = sigma(model, x0, a_mu, std::abs(a_rho), 0.0);
        return s0 > 0.0 ? fraction * s0 : 0.0;
    } catch (const InvalidDomain&) {
        return 0.0;
    }
}

} // namespace muskat
