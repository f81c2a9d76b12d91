#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "muskat/errors.hpp"
#include "muskat/fft.hpp"

namespace muskat {

// ---------------------------------------------------------------------------
// Periodic interface graph z = f(alpha) on [0,L)^dims, dims = 1 or 2,
// represented by its Fourier coefficients:
//
//     f(alpha) = sum_k fhat(k) exp(2 pi i k . alpha / L),
//
// lattice frequencies xi = 2 pi k / L. Coefficients are stored in DFT bin
// order per axis: bin i holds wavenumber k = i for i <= N/2, k = i - N
// otherwise (so bin N/2 is the Nyquist mode). Real interfaces keep Hermitian
// symmetry fhat(-k) = conj(fhat(k)); the mean bin is pinned to zero.
// ---------------------------------------------------------------------------

struct SpectralInterface {
    int dims = 1;
    int modes = 0;      // N per axis, power of two
    double period = 0;  // L, same for every axis
    std::vector<std::complex<double>> coef;

    SpectralInterface() = default;
    SpectralInterface(int dims_, int modes_, double period_)
        : dims(dims_), modes(modes_), period(period_),
          coef(static_cast<size_t>(dims_ == 1 ? modes_ : modes_ * modes_)) {
        if (dims != 1 && dims != 2) throw Error("dims must be 1 or 2");
        if (modes < 4 || (modes & (modes - 1)) != 0) throw Error("modes must be a power of two >= 4");
        if (!(period > 0)) throw Error("period must be positive");
    }

    size_t size() const { return coef.size(); }

    int wavenumber(int bin) const { return bin <= modes / 2 ? bin : bin - modes; }
    int bin_of(int k) const { return k >= 0 ? k : k + modes; }

    // |xi| for a flat coefficient index.
    double xi_abs(size_t idx) const {
        const double base = 2.0 * std::numbers::pi / period;
        if (dims == 1) {
            return base * std::abs(wavenumber(static_cast<int>(idx)));
        }
        const int k1 = wavenumber(static_cast<int>(idx) / modes);
        const int k2 = wavenumber(static_cast<int>(idx) % modes);
        return base * std::hypot(static_cast<double>(k1), static_cast<double>(k2));
    }

    std::complex<double>& at(int k1, int k2 = 0) {
        return dims == 1 ? coef[static_cast<size_t>(bin_of(k1))]
                         : coef[static_cast<size_t>(bin_of(k1)) * modes + bin_of(k2)];
    }
    const std::complex<double>& at(int k1, int k2 = 0) const {
        return dims == 1 ? coef[static_cast<size_t>(bin_of(k1))]
                         : coef[static_cast<size_t>(bin_of(k1)) * modes + bin_of(k2)];
    }

    bool same_grid(const SpectralInterface& o) const {
        return dims == o.dims && modes == o.modes && period == o.period;
    }
};

inline void require_same_grid(const SpectralInterface& a, const SpectralInterface& b) {
    if (!a.same_grid(b))
        throw GridMismatch("operands live on different grids");
}

struct NormSpec {
    double s = 0.0;   // homogeneous order
    double nu = 0.0;  // analyticity weight rate
    double t = 0.0;   // time multiplying nu in the weight exp(nu t |xi|)
};

// ---------------------------------------------------------------------------
// Hermitian bookkeeping
// ---------------------------------------------------------------------------

// Project onto the Hermitian (real-field) subspace and pin the mean to zero.
inline void symmetrize(SpectralInterface& f) {
    const int n = f.modes;
    auto pair_up = [&](size_t a, size_t b) {
        if (a == b) {
            f.coef[a] = std::complex<double>(f.coef[a].real(), 0.0);
            return;
        }
        const std::complex<double> avg = 0.5 * (f.coef[a] + std::conj(f.coef[b]));
        f.coef[a] = avg;
        f.coef[b] = std::conj(avg);
    };
    if (f.dims == 1) {
        for (int i = 0; i <= n / 2; ++i) pair_up(static_cast<size_t>(i), static_cast<size_t>((n - i) % n));
    } else {
        for (int i1 = 0; i1 < n; ++i1) {
            for (int i2 = 0; i2 < n; ++i2) {
                const size_t a = static_cast<size_t>(i1) * n + i2;
                const size_t b = static_cast<size_t>((n - i1) % n) * n + (n - i2) % n;
                if (a <= b) pair_up(a, b);
            }
        }
    }
    f.coef[0] = 0.0;
}

inline double hermitian_defect(const SpectralInterface& f) {
    SpectralInterface g = f;
    symmetrize(g);
    g.coef[0] = f.coef[0];  // the mean pin is a constraint, not a symmetry defect
    double worst = 0.0;
    for (size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f.coef[i] - g.coef[i]));
    return worst;
}

// ---------------------------------------------------------------------------
// Grid transforms
// ---------------------------------------------------------------------------

inline std::vector<double> to_grid(const SpectralInterface& f) {
    std::vector<std::complex<double>> work(f.coef);
    fft::transform(work, f.dims, f.modes, FFTW_BACKWARD);
    std::vector<double> out(work.size());
    for (size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
}

inline SpectralInterface from_grid(const std::vector<double>& values, int dims, int modes,
                                   double period) {
    SpectralInterface f(dims, modes, period);
    if (values.size() != f.size()) throw GridMismatch("grid values have wrong length");
    std::vector<std::complex<double>> work(values.begin(), values.end());
    fft::transform(work, dims, modes, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (size_t i = 0; i < work.size(); ++i) f.coef[i] = scale * work[i];
    symmetrize(f);
    return f;
}

// ---------------------------------------------------------------------------
// Norms. Wiener: sum_{k != 0} |xi|^s exp(nu t |xi|) |fhat(k)|.
// Sobolev: (sum_{k != 0} |xi|^{2s} exp(2 nu t |xi|) |fhat(k)|^2)^{1/2}.
// Both reduce in fixed bin order so results are bit-reproducible.
// ---------------------------------------------------------------------------

namespace detail {
inline double weight_exponent(const NormSpec& n, double xi) {
    const double w = n.nu * n.t * xi;
    if (w > 700.0)
        throw WeightOverflow("analyticity weight exp(" + std::to_string(w) + ") overflows",
                             xi);
    return w;
}
}  // namespace detail

inline double wiener_norm(const SpectralInterface& f, const NormSpec& n = {}) {
    double acc = 0.0;
    for (size_t i = 1; i < f.size(); ++i) {
        const double xi = f.xi_abs(i);
        if (xi == 0.0) continue;  // dims == 2 hits k = 0 only at i = 0
        acc += std::pow(xi, n.s) * std::exp(detail::weight_exponent(n, xi)) * std::abs(f.coef[i]);
    }
    return acc;
}

inline double sobolev_norm(const SpectralInterface& f, const NormSpec& n = {}) {
    double acc = 0.0;
    for (size_t i = 1; i < f.size(); ++i) {
        const double xi = f.xi_abs(i);
        if (xi == 0.0) continue;
        const double a = std::abs(f.coef[i]);
        acc += std::pow(xi, 2.0 * n.s) * std::exp(2.0 * detail::weight_exponent(n, xi)) * a * a;
    }
    return std::sqrt(acc);
}

// Physical L^2 norm over [0,L)^dims (coefficient l^2 carries a sqrt(L^dims)
// Jacobian under this Fourier convention).
inline double l2_norm(const SpectralInterface& f, double nu = 0.0, double t = 0.0) {
    return std::sqrt(std::pow(f.period, f.dims)) * sobolev_norm(f, NormSpec{0.0, nu, t});
}

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

// Lambda = (-Delta)^{1/2}: multiplier |xi|.
inline SpectralInterface apply_lambda(const SpectralInterface& f) {
    SpectralInterface g = f;
    for (size_t i = 0; i < g.size(); ++i) g.coef[i] *= g.xi_abs(i);
    return g;
}

// Riesz transform R_axis: multiplier -i xi_axis / |xi| (zero on the mean).
// The Nyquist bin has no conjugate partner, so an odd multiplier would break
// Hermitian symmetry there; it is zeroed, consistent with derivative().
inline SpectralInterface apply_riesz(const SpectralInterface& f, int axis) {
    if (axis < 0 || axis >= f.dims) throw Error("riesz axis out of range");
    SpectralInterface g = f;
    const int n = g.modes;
    for (size_t i = 0; i < g.size(); ++i) {
        const int b1 = g.dims == 1 ? static_cast<int>(i) : static_cast<int>(i) / n;
        const int b2 = g.dims == 1 ? 0 : static_cast<int>(i) % n;
        const int k1 = g.wavenumber(b1);
        const int k2 = g.wavenumber(b2);
        const double kn = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
        const int ka = axis == 0 ? k1 : k2;
        if (kn == 0.0 || std::abs(ka) == n / 2) {
            g.coef[i] = 0.0;
            continue;
        }
        g.coef[i] *= std::complex<double>(0.0, -static_cast<double>(ka) / kn);
    }
    return g;
}

inline SpectralInterface derivative(const SpectralInterface& f, int axis) {
    if (axis < 0 || axis >= f.dims) throw Error("derivative axis out of range");
    SpectralInterface g = f;
    const int n = g.modes;
    const double base = 2.0 * std::numbers::pi / g.period;
    for (size_t i = 0; i < g.size(); ++i) {
        const int b = g.dims == 1 ? static_cast<int>(i)
                                  : (axis == 0 ? static_cast<int>(i) / n : static_cast<int>(i) % n);
        const int k = g.wavenumber(b);
        if (std::abs(k) == n / 2) {
            g.coef[i] = 0.0;
            continue;
        }
        g.coef[i] *= std::complex<double>(0.0, base * k);
    }
    return g;
}

// Single mollification: multiplier exp(-4 pi^2 eps |xi|^2).
inline SpectralInterface mollify(const SpectralInterface& f, double eps) {
    if (eps == 0.0) return f;
    SpectralInterface g = f;
    const double c = 4.0 * std::numbers::pi * std::numbers::pi * eps;
    for (size_t i = 0; i < g.size(); ++i) {
        const double xi = g.xi_abs(i);
        g.coef[i] *= std::exp(-c * xi * xi);
    }
    return g;
}

// 2/3-style dealiasing: zero every bin with any |k_axis| > fraction * N/2.
inline SpectralInterface dealias(const SpectralInterface& f, double fraction) {
    SpectralInterface g = f;
    const int n = g.modes;
    const double cut = fraction * (n / 2);
    for (size_t i = 0; i < g.size(); ++i) {
        const int b1 = g.dims == 1 ? static_cast<int>(i) : static_cast<int>(i) / n;
        const int b2 = g.dims == 1 ? 0 : static_cast<int>(i) % n;
        if (std::abs(g.wavenumber(b1)) > cut || std::abs(g.wavenumber(b2)) > cut)
            g.coef[i] = 0.0;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Arithmetic helpers used by the stepper and the experiments
// ---------------------------------------------------------------------------

inline SpectralInterface operator+(const SpectralInterface& a, const SpectralInterface& b) {
    require_same_grid(a, b);
    SpectralInterface c = a;
    for (size_t i = 0; i < c.size(); ++i) c.coef[i] += b.coef[i];
    return c;
}

inline SpectralInterface operator-(const SpectralInterface& a, const SpectralInterface& b) {
    require_same_grid(a, b);
    SpectralInterface c = a;
    for (size_t i = 0; i < c.size(); ++i) c.coef[i] -= b.coef[i];
    return c;
}

inline SpectralInterface operator*(double s, const SpectralInterface& a) {
    SpectralInterface c = a;
    for (size_t i = 0; i < c.size(); ++i) c.coef[i] *= s;
    return c;
}

} // namespace muskat
