#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

#include "muskat/errors.hpp"

namespace muskat::fft {

// Thin FFTW wrappers, complex-to-complex, in place, unnormalized.
// Plans are created with FFTW_ESTIMATE so planning is deterministic and
// cheap at the sizes used here; callers normalize by 1/N^dims themselves.

inline void transform_1d(std::complex<double>* data, int n, int sign) {
    fftw_plan plan = fftw_plan_dft_1d(n,
                                      reinterpret_cast<fftw_complex*>(data),
                                      reinterpret_cast<fftw_complex*>(data),
                                      sign, FFTW_ESTIMATE);
    if (!plan) throw Error("fftw_plan_dft_1d failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

inline void transform_2d(std::complex<double>* data, int n, int sign) {
    fftw_plan plan = fftw_plan_dft_2d(n, n,
                                      reinterpret_cast<fftw_complex*>(data),
                                      reinterpret_cast<fftw_complex*>(data),
                                      sign, FFTW_ESTIMATE);
    if (!plan) throw Error("fftw_plan_dft_2d failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// sign: FFTW_FORWARD (-1) for analysis, FFTW_BACKWARD (+1) for synthesis.
inline void transform(std::vector<std::complex<double>>& data, int dims, int n, int sign) {
    if (dims == 1) {
        transform_1d(data.data(), n, sign);
    } else {
        transform_2d(data.data(), n, sign);
    }
}

} // namespace muskat::fft
