#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "muskat/constants.hpp"
#include "muskat/errors.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

struct QuadratureScheme {
    int window_periods = 1;        // M: the beta window spans M periods per axis
    double dealias_fraction = 2.0 / 3.0;
    double fp_tol = 1e-10;         // relative fixed-point stop for the jump solve
    int fp_max_iter = 100;
};

// Grid-space potential jump Omega together with solver diagnostics.
struct PotentialJump {
    std::vector<double> omega;
    int iterations = 0;
    double contraction_ratio = 0.0;  // last successive-residual ratio (0 if single pass)
    double residual = 0.0;           // last F^{0,1} update size
};

// Vorticity amplitudes. 3D: w1 = d2 Omega, w2 = -d1 Omega,
// w3 = d2 Omega d1 f - d1 Omega d2 f. 2D keeps the single amplitude
// w = d_alpha Omega in w1 and leaves w2, w3 empty.
struct VorticityAmplitude {
    std::vector<double> w1, w2, w3;
};

// ---------------------------------------------------------------------------
// beta-quadrature machinery
//
// Principal-value integrals over the tangent shift beta are evaluated by the
// trapezoid rule on the beta lattice beta_j = j h, |j| <= K = M N/2, with
// half weights on the window faces. The lattice is symmetric under
// beta -> -beta, so the odd leading parts of the kernels cancel in pairs.
// The beta = 0 cell takes the analytic limit of the integrand where one
// exists (the 1D kernels are smooth there); the 2D-lattice kernels have
// direction-dependent limits and their central cell is dropped, consistent
// with the pair cancellation of their odd leading order.
// ---------------------------------------------------------------------------

namespace qdetail {

// Periodic extension: ext[u] = v[(u - K) mod N] for u in [0, N + 2K).
inline std::vector<double> extend_1d(const std::vector<double>& v, int n, int K) {
    std::vector<double> ext(static_cast<size_t>(n + 2 * K));
    for (int u = 0; u < n + 2 * K; ++u) {
        int s = (u - K) % n;
        if (s < 0) s += n;
        ext[static_cast<size_t>(u)] = v[static_cast<size_t>(s)];
    }
    return ext;
}

inline std::vector<double> extend_2d(const std::vector<double>& v, int n, int K) {
    const int m = n + 2 * K;
    std::vector<double> ext(static_cast<size_t>(m) * m);
    for (int u = 0; u < m; ++u) {
        int s1 = (u - K) % n;
        if (s1 < 0) s1 += n;
        for (int w = 0; w < m; ++w) {
            int s2 = (w - K) % n;
            if (s2 < 0) s2 += n;
            ext[static_cast<size_t>(u) * m + w] = v[static_cast<size_t>(s1) * n + s2];
        }
    }
    return ext;
}

struct Window1 {
    int K;
    double h;
    // trapezoid weight for offset index j in [-K, K]
    double weight(int j) const { return std::abs(j) == K ? 0.5 : 1.0; }
};

// Precomputed per-offset tables for the 2D beta lattice. Flat index
// jj = (j1 + K) * (2K + 1) + (j2 + K).
struct Window2 {
    int K = 0;
    double h = 0;
    int side = 0;  // 2K + 1
    std::vector<double> b1, b2, ri, r2i, wgt;

    Window2(int K_, double h_) : K(K_), h(h_), side(2 * K_ + 1) {
        const size_t m = static_cast<size_t>(side) * side;
        b1.resize(m);
        b2.resize(m);
        ri.resize(m);
        r2i.resize(m);
        wgt.resize(m);
        for (int j1 = -K; j1 <= K; ++j1) {
            for (int j2 = -K; j2 <= K; ++j2) {
                const size_t jj = static_cast<size_t>(j1 + K) * side + (j2 + K);
                const double x = j1 * h, y = j2 * h;
                const double r2 = x * x + y * y;
                b1[jj] = x;
                b2[jj] = y;
                if (j1 == 0 && j2 == 0) {
                    ri[jj] = 0.0;
                    r2i[jj] = 0.0;
                    wgt[jj] = 0.0;  // central cell dropped
                } else {
                    ri[jj] = 1.0 / std::sqrt(r2);
                    r2i[jj] = 1.0 / r2;
                    wgt[jj] = (std::abs(j1) == K ? 0.5 : 1.0) * (std::abs(j2) == K ? 0.5 : 1.0);
                }
            }
        }
    }
};

struct GridsCommon {
    int n = 0;
    int K = 0;
    double h = 0;
    std::vector<double> fg;                  // f on the grid
    std::vector<double> f1, f2;              // gradient components (f2 empty in 1D)
};

inline GridsCommon prepare(const SpectralInterface& f, const QuadratureScheme& q) {
    GridsCommon g;
    g.n = f.modes;
    g.K = q.window_periods * f.modes / 2;
    g.h = f.period / f.modes;
    g.fg = to_grid(f);
    g.f1 = to_grid(derivative(f, 0));
    if (f.dims == 2) g.f2 = to_grid(derivative(f, 1));
    return g;
}

}  // namespace qdetail

// ---------------------------------------------------------------------------
// Double layer potential D(Omega)
// ---------------------------------------------------------------------------

inline std::vector<double> double_layer(const SpectralInterface& f,
                                        const std::vector<double>& omega,
                                        const QuadratureScheme& q = {}) {
    using namespace qdetail;
    const GridsCommon g = prepare(f, q);
    const int n = g.n, K = g.K;
    if (omega.size() != f.size()) throw GridMismatch("double_layer: omega has wrong length");
    std::vector<double> out(f.size());

    if (f.dims == 1) {
        const SpectralInterface fs = from_grid(g.fg, 1, n, f.period);
        const std::vector<double> fpp = to_grid(derivative(derivative(fs, 0), 0));
        const auto extf = extend_1d(g.fg, n, K);
        const auto extfp = extend_1d(g.f1, n, K);
        const auto extO = extend_1d(omega, n, K);
        const Window1 win{K, g.h};
        for (int a = 0; a < n; ++a) {
            const double fa = g.fg[static_cast<size_t>(a)];
            double acc = 0.0;
            for (int j = -K; j <= K; ++j) {
                if (j == 0) {
                    // removable singularity: integrand -> f'' Omega / (2 (1 + f'^2))
                    const double fp = g.f1[static_cast<size_t>(a)];
                    acc += fpp[static_cast<size_t>(a)] * omega[static_cast<size_t>(a)] /
                           (2.0 * (1.0 + fp * fp));
                    continue;
                }
                const size_t u = static_cast<size_t>(a - j + K);
                const double beta = j * g.h;
                const double d = (fa - extf[u]) / beta;
                acc += win.weight(j) * (d - extfp[u]) / (1.0 + d * d) * extO[u] / beta;
            }
            out[static_cast<size_t>(a)] = g.h / std::numbers::pi * acc;
        }
        return out;
    }

    const Window2 win(K, g.h);
    const int m = n + 2 * K;
    const auto extf = extend_2d(g.fg, n, K);
    const auto extf1 = extend_2d(g.f1, n, K);
    const auto extf2 = extend_2d(g.f2, n, K);
    const auto extO = extend_2d(omega, n, K);
    for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
            const double fa = g.fg[static_cast<size_t>(a1) * n + a2];
            double acc = 0.0;
            for (int j1 = -K; j1 <= K; ++j1) {
                const size_t ebase = static_cast<size_t>(a1 - j1 + K) * m + (a2 + K);
                const size_t jbase = static_cast<size_t>(j1 + K) * win.side + K;
                for (int j2 = -K; j2 <= K; ++j2) {
                    const size_t u = ebase - j2;
                    const size_t jj = jbase + j2;
                    const double ri = win.ri[jj];
                    const double d = (fa - extf[u]) * ri;
                    const double s = 1.0 + d * d;
                    const double W = 1.0 / (s * std::sqrt(s));
                    const double num = d - (win.b1[jj] * extf1[u] + win.b2[jj] * extf2[u]) * ri;
                    acc += win.wgt[jj] * num * W * extO[u] * win.r2i[jj];
                }
            }
            out[static_cast<size_t>(a1) * n + a2] =
                g.h * g.h / (2.0 * std::numbers::pi) * acc;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Potential jump: Omega = a_mu D(Omega) - 2 a_rho f, solved by fixed-point
// iteration from Omega0 = -2 a_rho f. Contraction is measured in F^{0,1}.
// ---------------------------------------------------------------------------

inline PotentialJump solve_potential_jump(const SpectralInterface& f, const FluidParams& p,
                                          const QuadratureScheme& q = {}) {
    PotentialJump pj;
    const std::vector<double> fg = to_grid(f);
    pj.omega.resize(fg.size());
    for (size_t i = 0; i < fg.size(); ++i) pj.omega[i] = -2.0 * p.a_rho * fg[i];
    pj.iterations = 1;
    if (p.a_mu == 0.0) return pj;

    auto f01 = [&](const std::vector<double>& v) {
        return wiener_norm(from_grid(v, f.dims, f.modes, f.period), NormSpec{0.0});
    };
    double prev_update = -1.0;
    for (int it = 0; it < q.fp_max_iter; ++it) {
        const std::vector<double> D = double_layer(f, pj.omega, q);
        std::vector<double> next(fg.size());
        std::vector<double> diff(fg.size());
        for (size_t i = 0; i < fg.size(); ++i) {
            next[i] = p.a_mu * D[i] - 2.0 * p.a_rho * fg[i];
            diff[i] = next[i] - pj.omega[i];
        }
        const double upd = f01(diff);
        if (prev_update > 0.0) pj.contraction_ratio = upd / prev_update;
        prev_update = upd;
        pj.residual = upd;
        pj.omega = std::move(next);
        ++pj.iterations;
        if (upd < q.fp_tol * (1.0 + f01(pj.omega))) return pj;
    }
    throw NoConvergence("potential jump fixed point did not converge", pj.iterations,
                        pj.residual);
}

// ---------------------------------------------------------------------------
// Vorticity amplitudes from the potential jump
// ---------------------------------------------------------------------------

inline VorticityAmplitude vorticity(const SpectralInterface& f, const PotentialJump& pj) {
    VorticityAmplitude w;
    const SpectralInterface Om = from_grid(pj.omega, f.dims, f.modes, f.period);
    if (f.dims == 1) {
        w.w1 = to_grid(derivative(Om, 0));
        return w;
    }
    const std::vector<double> d1 = to_grid(derivative(Om, 0));
    const std::vector<double> d2 = to_grid(derivative(Om, 1));
    const std::vector<double> f1 = to_grid(derivative(f, 0));
    const std::vector<double> f2 = to_grid(derivative(f, 1));
    w.w1 = d2;
    w.w2.resize(d1.size());
    w.w3.resize(d1.size());
    for (size_t i = 0; i < d1.size(); ++i) {
        w.w2[i] = -d1[i];
        w.w3[i] = d2[i] * f1[i] - d1[i] * f2[i];
    }
    return w;
}

// ---------------------------------------------------------------------------
// Birkhoff-Rott integral (3D only); returns the three velocity components.
// ---------------------------------------------------------------------------

inline std::array<std::vector<double>, 3> birkhoff_rott(const SpectralInterface& f,
                                                        const VorticityAmplitude& w,
                                                        const QuadratureScheme& q = {}) {
    using namespace qdetail;
    if (f.dims != 2) throw Error("birkhoff_rott: defined for the 3D problem (dims == 2)");
    const GridsCommon g = prepare(f, q);
    const int n = g.n, K = g.K;
    const Window2 win(K, g.h);
    const int m = n + 2 * K;
    const auto extf = extend_2d(g.fg, n, K);
    const auto extw1 = extend_2d(w.w1, n, K);
    const auto extw2 = extend_2d(w.w2, n, K);
    const auto extw3 = extend_2d(w.w3, n, K);
    std::array<std::vector<double>, 3> br;
    for (auto& c : br) c.resize(f.size());
    const double pref = -g.h * g.h / (4.0 * std::numbers::pi);
    for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
            const double fa = g.fg[static_cast<size_t>(a1) * n + a2];
            double acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
            for (int j1 = -K; j1 <= K; ++j1) {
                const size_t ebase = static_cast<size_t>(a1 - j1 + K) * m + (a2 + K);
                const size_t jbase = static_cast<size_t>(j1 + K) * win.side + K;
                for (int j2 = -K; j2 <= K; ++j2) {
                    const size_t u = ebase - j2;
                    const size_t jj = jbase + j2;
                    const double ri = win.ri[jj];
                    const double d = (fa - extf[u]) * ri;
                    const double s = 1.0 + d * d;
                    const double c = win.wgt[jj] * win.r2i[jj] / (s * std::sqrt(s));
                    const double u1 = win.b1[jj] * ri, u2 = win.b2[jj] * ri;
                    acc1 += c * (u2 * extw3[u] - d * extw2[u]);
                    acc2 += c * (d * extw1[u] - u1 * extw3[u]);
                    acc3 += c * (u1 * extw2[u] - u2 * extw1[u]);
                }
            }
            const size_t idx = static_cast<size_t>(a1) * n + a2;
            br[0][idx] = pref * acc1;
            br[1][idx] = pref * acc2;
            br[2][idx] = pref * acc3;
        }
    }
    return br;
}

// ---------------------------------------------------------------------------
// Nonlinear transport integrals N2 and N3 (N1 is assembled spectrally by the
// dynamics from D(Omega)). Prefactors 1/(2 pi), 1/(4 pi) are included; the
// a_mu factor of N3 is not.
// ---------------------------------------------------------------------------

inline std::vector<double> n2_integral(const SpectralInterface& f, const PotentialJump& pj,
                                       const QuadratureScheme& q = {}) {
    using namespace qdetail;
    const GridsCommon g = prepare(f, q);
    const int n = g.n, K = g.K;
    const SpectralInterface Om = from_grid(pj.omega, f.dims, f.modes, f.period);
    std::vector<double> out(f.size());

    if (f.dims == 1) {
        const std::vector<double> dOm = to_grid(derivative(Om, 0));
        const SpectralInterface fs = from_grid(g.fg, 1, n, f.period);
        const std::vector<double> fpp = to_grid(derivative(derivative(fs, 0), 0));
        const auto extf = extend_1d(g.fg, n, K);
        const auto extdO = extend_1d(dOm, n, K);
        const Window1 win{K, g.h};
        for (int a = 0; a < n; ++a) {
            const double fa = g.fg[static_cast<size_t>(a)];
            const double fp = g.f1[static_cast<size_t>(a)];
            double acc = 0.0;
            for (int j = -K; j <= K; ++j) {
                if (j == 0) {
                    acc += -fpp[static_cast<size_t>(a)] * fp * dOm[static_cast<size_t>(a)] /
                           (2.0 * (1.0 + fp * fp));
                    continue;
                }
                const size_t u = static_cast<size_t>(a - j + K);
                const double beta = j * g.h;
                const double d = (fa - extf[u]) / beta;
                acc += win.weight(j) * (d - fp) / (1.0 + d * d) * d * extdO[u] / beta;
            }
            out[static_cast<size_t>(a)] = g.h / (2.0 * std::numbers::pi) * acc;
        }
        return out;
    }

    const std::vector<double> dO1 = to_grid(derivative(Om, 0));
    const std::vector<double> dO2 = to_grid(derivative(Om, 1));
    const Window2 win(K, g.h);
    const int m = n + 2 * K;
    const auto extf = extend_2d(g.fg, n, K);
    const auto extd1 = extend_2d(dO1, n, K);
    const auto extd2 = extend_2d(dO2, n, K);
    for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
            const size_t idx = static_cast<size_t>(a1) * n + a2;
            const double fa = g.fg[idx];
            const double fx = g.f1[idx], fy = g.f2[idx];
            double acc = 0.0;
            for (int j1 = -K; j1 <= K; ++j1) {
                const size_t ebase = static_cast<size_t>(a1 - j1 + K) * m + (a2 + K);
                const size_t jbase = static_cast<size_t>(j1 + K) * win.side + K;
                for (int j2 = -K; j2 <= K; ++j2) {
                    const size_t u = ebase - j2;
                    const size_t jj = jbase + j2;
                    const double ri = win.ri[jj];
                    const double u1 = win.b1[jj] * ri, u2 = win.b2[jj] * ri;
                    const double d = (fa - extf[u]) * ri;
                    const double s = 1.0 + d * d;
                    const double W = 1.0 / (s * std::sqrt(s));
                    acc += win.wgt[jj] * win.r2i[jj] *
                           (((u1 + d * fx) * W - u1) * extd1[u] +
                            ((u2 + d * fy) * W - u2) * extd2[u]);
                }
            }
            out[idx] = g.h * g.h / (4.0 * std::numbers::pi) * acc;
        }
    }
    return out;
}

// 3D only. dlayer is D(Omega) on the grid (as returned by double_layer).
inline std::vector<double> n3_integral(const SpectralInterface& f,
                                       const std::vector<double>& dlayer,
                                       const QuadratureScheme& q = {}) {
    using namespace qdetail;
    if (f.dims != 2) throw Error("n3_integral: defined for the 3D problem (dims == 2)");
    const GridsCommon g = prepare(f, q);
    const int n = g.n, K = g.K;
    const SpectralInterface Ds = from_grid(dlayer, 2, n, f.period);
    const std::vector<double> dD1 = to_grid(derivative(Ds, 0));
    const std::vector<double> dD2 = to_grid(derivative(Ds, 1));
    const Window2 win(K, g.h);
    const int m = n + 2 * K;
    const auto extf = extend_2d(g.fg, n, K);
    const auto extf1 = extend_2d(g.f1, n, K);
    const auto extf2 = extend_2d(g.f2, n, K);
    const auto extd1 = extend_2d(dD1, n, K);
    const auto extd2 = extend_2d(dD2, n, K);
    std::vector<double> out(f.size());
    for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
            const size_t idx = static_cast<size_t>(a1) * n + a2;
            const double fa = g.fg[idx];
            const double px = -g.f2[idx], py = g.f1[idx];  // grad^perp f at the target
            double acc = 0.0;
            for (int j1 = -K; j1 <= K; ++j1) {
                const size_t ebase = static_cast<size_t>(a1 - j1 + K) * m + (a2 + K);
                const size_t jbase = static_cast<size_t>(j1 + K) * win.side + K;
                for (int j2 = -K; j2 <= K; ++j2) {
                    const size_t u = ebase - j2;
                    const size_t jj = jbase + j2;
                    const double ri = win.ri[jj];
                    const double d = (fa - extf[u]) * ri;
                    const double s = 1.0 + d * d;
                    const double W = 1.0 / (s * std::sqrt(s));
                    const double bp = win.b1[jj] * px + win.b2[jj] * py;
                    const double dp = -extd1[u] * extf2[u] + extd2[u] * extf1[u];
                    acc += win.wgt[jj] * bp * dp * W * ri * win.r2i[jj];
                }
            }
            out[idx] = g.h * g.h / (4.0 * std::numbers::pi) * acc;
        }
    }
    return out;
}

} // namespace muskat
