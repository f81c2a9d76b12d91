#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "muskat/interface_ops.hpp"

using namespace muskat;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralInterface cos_1d(int n, double amp, int k = 1, double period = 2.0 * kPi) {
    SpectralInterface f(1, n, period);
    f.at(k) = amp / 2.0;
    f.at(-k) = amp / 2.0;
    return f;
}

std::vector<double> cos_grid_1d(int n, double amp, int k = 1) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] = amp * std::cos(k * 2.0 * kPi * j / n);
    return v;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sup_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("double layer self-convergence under grid refinement (1D)") {
    // f = 0.1 cos, Omega = cos; compare N = 256 against N = 512 on shared nodes
    const SpectralInterface f256 = cos_1d(256, 0.1);
    const SpectralInterface f512 = cos_1d(512, 0.1);
    const std::vector<double> D256 = double_layer(f256, cos_grid_1d(256, 1.0));
    const std::vector<double> D512 = double_layer(f512, cos_grid_1d(512, 1.0));
    double worst = 0.0;
    for (int a = 0; a < 256; ++a)
        worst = std::max(worst, std::abs(D512[static_cast<size_t>(2 * a)] -
                                         D256[static_cast<size_t>(a)]));
    REQUIRE(worst <= 1e-6);
}

TEST_CASE("potential jump with a_mu = 0 is exactly -2 a_rho f") {
    for (int dims : {1, 2}) {
        SpectralInterface f(dims, dims == 1 ? 128 : 16, 2.0 * kPi);
        f.at(1) = 0.1;
        f.at(-1) = 0.1;
        if (dims == 2) {
            f.at(1, 1) = 0.05;
            f.at(-1, -1) = 0.05;
        }
        FluidParams p;
        p.a_mu = 0.0;
        p.a_rho = 1.5;
        const PotentialJump pj = solve_potential_jump(f, p);
        REQUIRE(pj.iterations == 1);
        REQUIRE(pj.residual == 0.0);
        const std::vector<double> fg = to_grid(f);
        for (size_t i = 0; i < fg.size(); ++i)
            REQUIRE(std::abs(pj.omega[i] + 2.0 * 1.5 * fg[i]) <= 1e-13);
    }
}

TEST_CASE("potential jump deviation from -2 a_rho f is second order in the amplitude") {
    FluidParams p;
    p.a_mu = 0.5;
    p.a_rho = 1.0;
    std::vector<double> devs;
    for (double eps : {1e-2, 5e-3, 2.5e-3}) {
        const SpectralInterface f = cos_1d(128, eps);
        const PotentialJump pj = solve_potential_jump(f, p);
        const std::vector<double> fg = to_grid(f);
        std::vector<double> dev(fg.size());
        for (size_t i = 0; i < fg.size(); ++i) dev[i] = pj.omega[i] + 2.0 * fg[i];
        devs.push_back(sup_abs(dev));
    }
    const double order1 = std::log2(devs[0] / devs[1]);
    const double order2 = std::log2(devs[1] / devs[2]);
    REQUIRE(order1 == Catch::Approx(2.0).margin(0.2));
    REQUIRE(order2 == Catch::Approx(2.0).margin(0.2));
}

TEST_CASE("fixed point contracts no slower than the |a_mu| S1(x) certificate") {
    FluidParams p;
    p.a_mu = 0.8;
    p.a_rho = 1.0;
    SpectralInterface f = cos_1d(128, 0.0);
    // x = 0.12 keeps the ledger valid at |a_mu| = 0.8 (8|a_mu|S1 = 0.78)
    f.at(1) = 0.04;
    f.at(-1) = 0.04;
    f.at(2) = 0.01;
    f.at(-2) = 0.01;
    const double x = wiener_norm(f, NormSpec{1.0});
    const ConstantLedger L = ledger(x, p.a_mu);
    REQUIRE(L.valid);
    const PotentialJump pj = solve_potential_jump(f, p);
    REQUIRE(pj.contraction_ratio > 0.0);
    REQUIRE(pj.contraction_ratio < 1.0);
    REQUIRE(pj.contraction_ratio <= std::abs(p.a_mu) * L.s1 * 1.05);
    REQUIRE(pj.residual <= 1e-10 * (1.0 + wiener_norm(from_grid(pj.omega, 1, 128, 2.0 * kPi),
                                                      NormSpec{0.0})));
}

TEST_CASE("fixed point reports non-convergence under a tight iteration cap") {
    FluidParams p;
    p.a_mu = 1.0;
    p.a_rho = 1.0;
    const SpectralInterface f = cos_1d(32, 0.8);
    // control: with the default cap the same state converges, in more than
    // four sweeps, so a cap of four must trip the error path
    const PotentialJump ok = solve_potential_jump(f, p);
    REQUIRE(ok.iterations > 4);
    QuadratureScheme q;
    q.fp_max_iter = 4;
    REQUIRE_THROWS_AS(solve_potential_jump(f, p, q), NoConvergence);
}

TEST_CASE("double layer is linear in Omega") {
    const SpectralInterface f = cos_1d(64, 0.2);
    const std::vector<double> o1 = cos_grid_1d(64, 1.0, 1);
    const std::vector<double> o2 = cos_grid_1d(64, 0.7, 3);
    std::vector<double> combo(o1.size());
    for (size_t i = 0; i < o1.size(); ++i) combo[i] = o1[i] + 2.0 * o2[i];
    const std::vector<double> Dc = double_layer(f, combo);
    const std::vector<double> D1 = double_layer(f, o1);
    const std::vector<double> D2 = double_layer(f, o2);
    for (size_t i = 0; i < Dc.size(); ++i)
        REQUIRE(std::abs(Dc[i] - (D1[i] + 2.0 * D2[i])) <= 1e-13);
}

TEST_CASE("double layer equivariance under grid translation and reflection") {
    const int n = 64;
    SpectralInterface g(1, n, 2.0 * kPi);
    g.at(1) = {0.08, 0.03};
    g.at(-1) = std::conj(g.at(1));
    g.at(3) = {0.02, -0.01};
    g.at(-3) = std::conj(g.at(3));
    const std::vector<double> gg = to_grid(g);
    const std::vector<double> om = cos_grid_1d(n, 1.0, 2);
    const std::vector<double> D = double_layer(g, om);

    SECTION("translation by 5 cells") {
        auto shift = [&](const std::vector<double>& v) {
            std::vector<double> out(v.size());
            for (int a = 0; a < n; ++a) out[static_cast<size_t>(a)] = v[static_cast<size_t>((a + 5) % n)];
            return out;
        };
        const SpectralInterface gs = from_grid(shift(gg), 1, n, 2.0 * kPi);
        const std::vector<double> Ds = double_layer(gs, shift(om));
        REQUIRE(sup_diff(Ds, shift(D)) <= 1e-12);
    }
    SECTION("reflection alpha -> -alpha") {
        auto reflect = [&](const std::vector<double>& v) {
            std::vector<double> out(v.size());
            for (int a = 0; a < n; ++a) out[static_cast<size_t>(a)] = v[static_cast<size_t>((n - a) % n)];
            return out;
        };
        const SpectralInterface gr = from_grid(reflect(gg), 1, n, 2.0 * kPi);
        const std::vector<double> Dr = double_layer(gr, reflect(om));
        REQUIRE(sup_diff(Dr, reflect(D)) <= 1e-12);
    }
}

TEST_CASE("widening the quadrature window is a refining sequence") {
    const SpectralInterface f = cos_1d(64, 0.2);
    const std::vector<double> om = cos_grid_1d(64, 1.0);
    QuadratureScheme q1, q3, q5;
    q1.window_periods = 1;
    q3.window_periods = 3;
    q5.window_periods = 5;
    const std::vector<double> D1 = double_layer(f, om, q1);
    const std::vector<double> D3 = double_layer(f, om, q3);
    const std::vector<double> D5 = double_layer(f, om, q5);
    const double scale = sup_abs(D1);
    REQUIRE(scale > 0.0);
    const double d13 = sup_diff(D1, D3);
    const double d35 = sup_diff(D3, D5);
    // successive window increments shrink (tail of the slowly decaying
    // kernel); measured: d13/scale ~ 0.28, d35/scale ~ 0.048
    REQUIRE(d13 < scale);
    REQUIRE(d35 <= 0.5 * d13);
    REQUIRE(d35 <= 0.1 * scale);
}

TEST_CASE("vorticity components in 2D and 3D") {
    SECTION("1D interface: w = d_alpha Omega") {
        const SpectralInterface f = cos_1d(64, 0.1);
        FluidParams p;
        p.a_rho = 1.0;
        const PotentialJump pj = solve_potential_jump(f, p);
        const VorticityAmplitude w = vorticity(f, pj);
        REQUIRE(w.w2.empty());
        REQUIRE(w.w3.empty());
        // Omega = -2f exactly, so w = -2 f'
        const std::vector<double> fp = to_grid(derivative(f, 0));
        for (size_t i = 0; i < w.w1.size(); ++i)
            REQUIRE(std::abs(w.w1[i] + 2.0 * fp[i]) <= 1e-12);
    }
    SECTION("2D interface: w3 identity") {
        SpectralInterface f(2, 16, 2.0 * kPi);
        f.at(1, 0) = 0.05;
        f.at(0, 1) = {0.03, 0.01};
        symmetrize(f);
        FluidParams p;
        p.a_mu = 0.5;
        p.a_rho = 1.0;
        const PotentialJump pj = solve_potential_jump(f, p);
        const VorticityAmplitude w = vorticity(f, pj);
        const SpectralInterface Om = from_grid(pj.omega, 2, 16, 2.0 * kPi);
        const std::vector<double> d1 = to_grid(derivative(Om, 0));
        const std::vector<double> d2 = to_grid(derivative(Om, 1));
        const std::vector<double> f1 = to_grid(derivative(f, 0));
        const std::vector<double> f2 = to_grid(derivative(f, 1));
        for (size_t i = 0; i < w.w3.size(); ++i) {
            REQUIRE(w.w1[i] == d2[i]);
            REQUIRE(w.w2[i] == -d1[i]);
            REQUIRE(std::abs(w.w3[i] - (d2[i] * f1[i] - d1[i] * f2[i])) <= 1e-14);
        }
    }
}

TEST_CASE("flat-interface Birkhoff-Rott matches the Riesz multiplier") {
    const int n = 64;
    const SpectralInterface flat(2, n, 2.0 * kPi);
    SpectralInterface w1s(2, n, 2.0 * kPi), w2s(2, n, 2.0 * kPi);
    w1s.at(1, 1) = 0.5;
    symmetrize(w1s);
    w2s.at(1, -1) = {0.25, 0.25};
    symmetrize(w2s);
    VorticityAmplitude w;
    w.w1 = to_grid(w1s);
    w.w2 = to_grid(w2s);
    w.w3.assign(static_cast<size_t>(n) * n, 0.0);
    const auto br = birkhoff_rott(flat, w);
    // horizontal components vanish identically on a flat interface
    REQUIRE(sup_abs(br[0]) <= 1e-14);
    REQUIRE(sup_abs(br[1]) <= 1e-14);
    // vertical component equals -(1/2)(R1 w2 - R2 w1) up to quadrature error
    const SpectralInterface target_s =
        -0.5 * (apply_riesz(w2s, 0) - apply_riesz(w1s, 1));
    const std::vector<double> target = to_grid(target_s);
    REQUIRE(sup_abs(target) > 0.1);  // the check is not vacuous
    REQUIRE(sup_diff(br[2], target) <= 6e-3);
}

TEST_CASE("n2 integral: flat interface gives zero") {
    const int n = 64;
    const SpectralInterface flat(1, n, 2.0 * kPi);
    PotentialJump pj;
    pj.omega = cos_grid_1d(n, 1.0);
    const std::vector<double> v = n2_integral(flat, pj);
    REQUIRE(sup_abs(v) <= 1e-14);

    const SpectralInterface flat2(2, 16, 2.0 * kPi);
    PotentialJump pj2;
    pj2.omega = std::vector<double>(256, 0.0);
    SpectralInterface os(2, 16, 2.0 * kPi);
    os.at(1, 0) = 0.5;
    symmetrize(os);
    pj2.omega = to_grid(os);
    const std::vector<double> v2 = n2_integral(flat2, pj2);
    REQUIRE(sup_abs(v2) <= 1e-14);
}

TEST_CASE("n3 integral requires the 3D model and vanishes on a flat interface") {
    const SpectralInterface f1(1, 16, 2.0 * kPi);
    REQUIRE_THROWS(n3_integral(f1, std::vector<double>(16, 0.0)));

    const int n = 16;
    const SpectralInterface flat(2, n, 2.0 * kPi);
    SpectralInterface ds(2, n, 2.0 * kPi);
    ds.at(1, 2) = 0.3;
    symmetrize(ds);
    const std::vector<double> v = n3_integral(flat, to_grid(ds));
    REQUIRE(sup_abs(v) <= 1e-14);
}

TEST_CASE("omega length mismatch is rejected") {
    const SpectralInterface f = cos_1d(64, 0.1);
    REQUIRE_THROWS_AS(double_layer(f, std::vector<double>(32, 0.0)), GridMismatch);
}
