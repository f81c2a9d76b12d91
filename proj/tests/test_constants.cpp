#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "muskat/constants.hpp"

using namespace muskat;

namespace {

// Independent ledger re-derivation in long double arithmetic.
struct LedgerLD {
    long double s1, s2, c1, c2, c3, c4, c5x, b1, b2;
};

LedgerLD ledger_ld(long double x, long double a) {
    LedgerLD L{};
    const long double omx2 = 1.0L - x * x;
    L.s1 = x / omx2;
    L.s2 = L.s1 / (1.0L - a * L.s1);
    const long double d2 = 1.0L - 2.0L * a * L.s1;
    const long double d5 = 1.0L - 5.0L * a * L.s1;
    const long double d8 = 1.0L - 8.0L * a * L.s1;
    const long double d3 = 1.0L - 3.0L * a * L.s2 * (1.0L + a * L.s2);
    const long double d6 = 1.0L - 6.0L * a * L.s2 * (1.0L + a * L.s2);
    L.c1 = (1.0L - a * L.s1) / d5;
    L.c2 = L.c1 / (d2 * omx2);
    L.c3 = ((1.0L + x * x) / omx2) * (1.0L + a * 6.0L * x * (1.0L - a * L.s1) / (omx2 * d2 * d5));
    const long double mix = L.c3 + L.c1 + 4.0L * L.s1 * L.c1 * x;
    L.c4 = (1.0L + L.s2 * L.s2 * a * a * mix) / d3;
    L.c5x = L.s2 * (3.0L + a * L.s2 * (3.0L + mix)) / d3;
    L.b1 = d2 / d8;
    L.b2 = (1.0L + 2.0L * L.s2 * L.s2 * a * mix) / d6;
    return L;
}

// Series form of the 3D decay factor; geometric tail, truncated when the next
// term is below 1e-16 of the partial sum.
double sigma3d_series(double x, double a, double a_rho, double nu) {
    const ConstantLedger L = ledger(x, a);
    REQUIRE(L.valid);
    long double s_2n = 0, s_n2n = 0, s_2n1 = 0, s_n2n1 = 0;
    const long double x2 = static_cast<long double>(x) * x;
    long double p = x2;  // x^{2n}
    for (int n = 1; n <= 4000; ++n) {
        s_2n += p;
        s_n2n += n * p;
        s_2n1 += p * x;
        s_n2n1 += n * p * x;
        p *= x2;
        if (p < 1e-16L * (s_2n + 1e-30L) && n > 4) break;
    }
    const double c5 = x > 0 ? L.c5x / x : 0.0;
    return -nu + a_rho - 2.0 * a_rho * a * L.c5x -
           2.0 * a_rho * L.b1 * 2.0 * static_cast<double>(s_n2n) -
           2.0 * a_rho * L.b2 * static_cast<double>(s_2n) -
           a * a_rho * (12.0 * L.c2 * static_cast<double>(s_n2n1) +
                        2.0 * c5 * static_cast<double>(s_2n1));
}

}  // namespace

TEST_CASE("ledger hand value: S1(0.2) = 0.2/0.96") {
    const ConstantLedger L = ledger(0.2, 0.0);
    REQUIRE(L.valid);
    REQUIRE(L.s1 == Catch::Approx(0.2 / 0.96).epsilon(1e-15));
    REQUIRE(L.s2 == Catch::Approx(L.s1).epsilon(1e-15));  // a = 0 collapses S2 to S1
    REQUIRE(L.c1 == Catch::Approx(1.0).epsilon(1e-15));
    REQUIRE(L.b1 == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ledger matches the long double oracle at x=0.2, a=0.5") {
    // x = 0.2 keeps every denominator positive at a = 0.5 (8 a S1 = 0.83);
    // larger x would first lose 1 - 8|a_mu|S1.
    const ConstantLedger L = ledger(0.2, 0.5);
    REQUIRE(L.valid);
    const LedgerLD O = ledger_ld(0.2L, 0.5L);
    auto close = [](double got, long double want) {
        REQUIRE(std::abs(got - static_cast<double>(want)) <=
                1e-12 * std::abs(static_cast<double>(want)));
    };
    close(L.s1, O.s1);
    close(L.s2, O.s2);
    close(L.c1, O.c1);
    close(L.c2, O.c2);
    close(L.c3, O.c3);
    close(L.c4, O.c4);
    close(L.c5x, O.c5x);
    close(L.b1, O.b1);
    close(L.b2, O.b2);
}

TEST_CASE("ledger reports the first failed denominator") {
    REQUIRE_FALSE(ledger(1.0, 0.0).valid);
    REQUIRE(ledger(1.0, 0.0).failed_denominator == "1 - x^2");
    REQUIRE_FALSE(ledger(-0.1, 0.0).valid);
    // at a=1, 1-5 S1 fails first as x grows
    ConstantLedger L = ledger(0.5, 1.0);
    REQUIRE_FALSE(L.valid);
    REQUIRE(L.failed_denominator == "1 - 5|a_mu|S1");
    REQUIRE(ledger(0.9, 0.0).valid);  // a = 0 keeps every denominator positive
}

TEST_CASE("a_mu enters through its absolute value") {
    // x = 0.15 is comfortably inside the validity region at |a_mu| = 0.6
    // (note x = 0.2 would sit exactly on the 8|a_mu|S1 = 1 singularity).
    const ConstantLedger Lp = ledger(0.15, 0.6);
    const ConstantLedger Lm = ledger(0.15, -0.6);
    REQUIRE(Lp.valid);
    REQUIRE(Lp.c4 == Lm.c4);
    REQUIRE(Lp.c5x == Lm.c5x);
    REQUIRE(sigma3d(0.15, 0.6, 1.0, 0.0) == sigma3d(0.15, -0.6, 1.0, 0.0));
    REQUIRE(threshold(0.6, Model::three_d) == threshold(-0.6, Model::three_d));
}

TEST_CASE("sigma3d closed form matches the series oracle to 1e-12 relative") {
    for (double a : {0.0, 0.5, 1.0}) {
        const double top = a == 0.0 ? 0.36 : 0.95 * threshold(a, Model::three_d);
        for (int i = 1; i <= 100; ++i) {
            const double x = top * i / 100.0;
            const double closed = sigma3d(x, a, 1.0, 0.0);
            const double series = sigma3d_series(x, a, 1.0, 0.0);
            REQUIRE(std::abs(closed - series) <= 1e-12 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("a_mu=0 sigma agrees with 1 - 2 sum (2n+1) x^{2n}") {
    for (double x : {0.1, 0.2, 0.3, 0.36}) {
        long double s = 0.0L;
        for (int n = 1; n <= 600; ++n) s += (2 * n + 1) * std::pow(static_cast<long double>(x), 2 * n);
        const double want = static_cast<double>(1.0L - 2.0L * s);
        REQUIRE(sigma3d(x, 0.0, 1.0, 0.0) == Catch::Approx(want).epsilon(1e-12));
        REQUIRE(sigma2d(x, 0.0, 1.0, 0.0) == Catch::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("frozen threshold values") {
    // the a_mu = 0 threshold is the positive root of 3x^4 - 8x^2 + 1
    const double exact = std::sqrt((8.0 - std::sqrt(52.0)) / 6.0);
    REQUIRE(threshold(0.0, Model::three_d) == Catch::Approx(exact).margin(2e-8));
    REQUIRE(threshold(0.0, Model::three_d) == Catch::Approx(0.362606).margin(1e-5));
    REQUIRE(threshold(1.0, Model::three_d) == Catch::Approx(0.080604).margin(1e-4));
    REQUIRE(threshold(1.0, Model::two_d) == Catch::Approx(0.128267).margin(1e-4));
    REQUIRE(threshold(0.0, Model::two_d) == Catch::Approx(exact).margin(2e-8));
    REQUIRE(threshold(0.5, Model::three_d) == Catch::Approx(0.139608).margin(1e-4));
    REQUIRE(threshold(0.5, Model::two_d) == Catch::Approx(0.202291).margin(1e-4));
}

TEST_CASE("threshold brackets the sign change") {
    for (double a : {0.0, 0.3, 1.0}) {
        for (Model m : {Model::two_d, Model::three_d}) {
            const double xs = threshold(a, m);
            REQUIRE(sigma(m, xs - 1e-6, a, 1.0, 0.0) > 0.0);
            double above;
            try {
                above = sigma(m, xs + 1e-6, a, 1.0, 0.0);
            } catch (const InvalidDomain&) {
                above = -1.0;
            }
            REQUIRE(above < 0.0);
        }
    }
}

TEST_CASE("threshold curve is strictly decreasing with matching endpoints") {
    const auto curve = threshold_curve(21, Model::three_d);
    REQUIRE(curve.size() == 21);
    REQUIRE(curve.front().a_mu == 0.0);
    REQUIRE(curve.back().a_mu == 1.0);
    for (size_t i = 0; i + 1 < curve.size(); ++i)
        REQUIRE(curve[i + 1].x_star < curve[i].x_star);
    REQUIRE(curve.front().x_star == threshold(0.0, Model::three_d));
    REQUIRE(curve.back().x_star == threshold(1.0, Model::three_d));
    for (const auto& s : curve) REQUIRE(s.sigma_at_half > 0.0);
}

TEST_CASE("curve samples are deterministic across resolutions") {
    const auto c21 = threshold_curve(21, Model::three_d);
    const auto c201 = threshold_curve(201, Model::three_d);
    // a_mu = 0.5 appears in both grids; pure functions must agree bitwise
    REQUIRE(c21[10].a_mu == 0.5);
    REQUIRE(c201[100].a_mu == 0.5);
    REQUIRE(c21[10].x_star == c201[100].x_star);
    REQUIRE(c21[10].sigma_at_half == c201[100].sigma_at_half);
}

TEST_CASE("sigma is homogeneous of degree one in a_rho at nu=0") {
    for (Model m : {Model::two_d, Model::three_d}) {
        const double s1 = sigma(m, 0.1, 0.4, 1.0, 0.0);
        const double s2 = sigma(m, 0.1, 0.4, 2.0, 0.0);
        REQUIRE(s2 == Catch::Approx(2.0 * s1).epsilon(1e-14));
        // and nu enters as a plain shift
        REQUIRE(sigma(m, 0.1, 0.4, 1.0, 0.25) == Catch::Approx(s1 - 0.25).epsilon(1e-14));
    }
}

TEST_CASE("2d and 3d thresholds agree at a_mu = 0") {
    REQUIRE(std::abs(threshold(0.0, Model::two_d) - threshold(0.0, Model::three_d)) < 1e-6);
}

TEST_CASE("sigma domain errors") {
    REQUIRE_THROWS_AS(sigma3d(1.0, 0.0, 1.0, 0.0), InvalidDomain);
    REQUIRE_THROWS_AS(sigma2d(-0.2, 0.0, 1.0, 0.0), InvalidDomain);
    REQUIRE_THROWS_AS(sigma2d(0.5, 1.0, 1.0, 0.0), InvalidDomain);  // 1-x^2-2x < 0
}

TEST_CASE("vorticity bound checks skip NaN fields and compute ratios") {
    const ConstantLedger L = ledger(0.2, 0.5);
    MeasuredNorms m;  // all NaN
    REQUIRE(vorticity_bounds(L, 0.5, 1.0, 0.4, m).empty());
    m.w1_f01 = 0.1;
    m.jump_f11 = 10.0;
    const auto checks = vorticity_bounds(L, 0.5, 1.0, 0.4, m);
    REQUIRE(checks.size() == 2);
    REQUIRE(checks[0].name == "w1_f01 <= 2 C1 a_rho x");
    REQUIRE(checks[0].bound == Catch::Approx(2.0 * L.c1 * 0.2));
    REQUIRE(checks[0].pass);
    REQUIRE(checks[0].ratio == Catch::Approx(0.1 / (2.0 * L.c1 * 0.2)));
    REQUIRE_FALSE(checks[1].pass);  // 10.0 > 2 b1 x
    SECTION("invalid ledger is rejected") {
        MeasuredNorms m2;
        m2.w1_f01 = 0.0;
        REQUIRE_THROWS_AS(vorticity_bounds(ledger(1.2, 0.0), 0.0, 1.0, 0.0, m2),
                          InvalidDomain);
    }
}
