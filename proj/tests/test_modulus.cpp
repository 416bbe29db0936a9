#include <doctest.h>

#include <cmath>
#include <fstream>

#include "omegadim/modulus.hpp"

using namespace omegadim;

namespace {
constexpr long double kLn2 = 0.693147180559945309417L;
}

TEST_CASE("mini-language parsing") {
    CHECK(ModulusSpec::parse("holder:0.5").kind() == ModulusKind::holder);
    CHECK(ModulusSpec::parse("holder:1/2").alpha() == BigRat(1, 2));
    CHECK(ModulusSpec::parse("lipschitz").kind() == ModulusKind::lipschitz);
    CHECK(ModulusSpec::parse("loglip").kind() == ModulusKind::loglip);
    CHECK(ModulusSpec::parse("powerlog:0.5:0.5").kind() == ModulusKind::power_log);
    CHECK_THROWS_AS(ModulusSpec::parse("holder:1.5"), ValidationError);
    CHECK_THROWS_AS(ModulusSpec::parse("holder:0"), ValidationError);
    CHECK_THROWS_AS(ModulusSpec::parse("nope"), ValidationError);
    // Monotonicity on (0,1] fails when beta > alpha.
    CHECK_THROWS_AS(ModulusSpec::parse("powerlog:0.5:1.0"), ValidationError);
}

TEST_CASE("log-space evaluation") {
    CHECK((double)ModulusSpec::parse("holder:0.5").eval_log(-20.0L) == doctest::Approx(-10.0));
    CHECK((double)ModulusSpec::parse("lipschitz").eval_log(-7.0L) == doctest::Approx(-7.0));
    long double lt = -40.0L * kLn2;  // ~ -27.7259
    double got = (double)ModulusSpec::parse("loglip").eval_log(lt);
    CHECK(got == doctest::Approx((double)(lt + std::log(1.0L - lt))).epsilon(1e-15));
    CHECK(got == doctest::Approx(-24.3681).epsilon(1e-4));
    CHECK_THROWS_AS(ModulusSpec::parse("holder:0.5").eval_log(0.5L), ValidationError);
}

TEST_CASE("exact omega values") {
    auto m = ModulusSpec::parse("holder:1/2");
    CHECK(m.omega_exact(BigRat(1, 4)).value() == BigRat(1, 2));
    CHECK(!m.omega_exact(BigRat(1, 3)).has_value());
    CHECK(ModulusSpec::lipschitz().omega_exact(BigRat(3, 7)).value() == BigRat(3, 7));
    CHECK(!ModulusSpec::loglip().omega_exact(BigRat(1, 4)).has_value());
}

TEST_CASE("scaling exponent eta") {
    CHECK(eta_estimate(ModulusSpec::parse("holder:0.5"), -1.0L).eta == 0.5);
    CHECK(eta_estimate(ModulusSpec::parse("holder:0.5"), -1.0L).exact);
    CHECK(eta_estimate(ModulusSpec::lipschitz(), -50.0L).eta == 1.0);
    double e40 = eta_estimate(ModulusSpec::loglip(), -40.0L * kLn2).eta;
    CHECK(e40 == doctest::Approx(0.8788930113).epsilon(1e-9));
    // Monotone non-decreasing in depth for loglip, constant for holder.
    double prev = 0.0;
    for (int d = 10; d <= 60; d += 10) {
        double e = eta_estimate(ModulusSpec::loglip(), -(long double)d * kLn2).eta;
        CHECK(e >= prev);
        prev = e;
        CHECK(eta_estimate(ModulusSpec::parse("holder:1/4"), -(long double)d * kLn2).eta ==
              0.25);
    }
}

TEST_CASE("regime classification") {
    long double depth = -60.0L * kLn2;
    CHECK(classify_regime(ModulusSpec::parse("holder:0.5"), depth) == Regime::fractal_regime);
    CHECK(classify_regime(ModulusSpec::lipschitz(), depth) == Regime::lipschitz_regime);
    CHECK(classify_regime(ModulusSpec::loglip(), depth) == Regime::fractal_regime);
    CHECK(classify_regime(ModulusSpec::parse("powerlog:1.5:0"), depth) ==
          Regime::constant_only);

    // Still growing but indistinguishable from eta = 1: explicitly undetermined.
    // omega(t) = t * (1 + 1e-10 |log2 t| ln 2), tabulated exactly.
    std::vector<std::pair<BigRat, BigRat>> pts;
    BigRat scale = rat_pow(BigRat(10), 16);
    for (int j = 40; j >= 0; --j) {
        BigRat t = pow2_rat(-j);
        BigRat factor = (scale + BigRat((long)(j * (double)kLn2 * 1e6))) / scale;
        pts.emplace_back(t, t * factor);
    }
    auto m = ModulusSpec::table(pts);
    CHECK(classify_regime(m, -39.0L * kLn2) == Regime::undetermined);
}

TEST_CASE("spectrum reference values") {
    CHECK(theoretical_spectrum(0.5, 0.25) == doctest::Approx(5.0 / 3.0));
    CHECK(theoretical_spectrum(0.5, 0.5) == doctest::Approx(2.0));
    CHECK(theoretical_spectrum(0.5, 0.75) == doctest::Approx(2.0));
    CHECK(theoretical_spectrum(1.0, 0.3) == doctest::Approx(1.0));
    CHECK(theoretical_spectrum(0.5, 1e-9) == doctest::Approx(1.5).epsilon(1e-6));
    // continuity at theta = eta from the left
    double left = theoretical_spectrum(0.5, 0.5 - 1e-13);
    CHECK(std::fabs(left - 2.0) < 1e-12);
}

TEST_CASE("spectrum upper bound") {
    CHECK(spectrum_upper_bound(0.5, 0.25) == doctest::Approx(5.0 / 3.0));
    CHECK(spectrum_upper_bound(1.0, 0.5) == doctest::Approx(1.0));
    CHECK(spectrum_upper_bound(0.3, 0.1) == doctest::Approx(2.0 - 0.2 / 0.9));
    CHECK(naive_spectrum_bound(0.3, 0.1) == doctest::Approx(1.7 / 0.9));
    CHECK_THROWS_AS(spectrum_upper_bound(0.5, 0.5), ValidationError);
    CHECK_THROWS_AS(spectrum_upper_bound(0.5, 0.7), ValidationError);

    // Strictly sharper than the naive bound on a grid.
    for (int i = 1; i < 50; ++i) {
        double eta = i / 50.0;
        for (int j = 1; j < 50; ++j) {
            double theta = eta * j / 50.0;
            if (theta <= 0 || theta >= eta) continue;
            double sharp = spectrum_upper_bound(eta, theta);
            CHECK(sharp < 2.0);
            CHECK(sharp < naive_spectrum_bound(eta, theta));
        }
    }
}

TEST_CASE("concavity scaling property omega(lambda t) >= lambda omega(t)") {
    for (const char* spec : {"holder:0.5", "holder:1/3", "lipschitz", "loglip",
                             "powerlog:0.5:0.5"}) {
        ModulusSpec m = ModulusSpec::parse(spec);
        for (int lam_exp = 1; lam_exp <= 3; ++lam_exp) {
            for (int j = 1; j <= 24; ++j) {
                long double lt = -(long double)j * kLn2;
                long double lhs = m.eval_log(lt - lam_exp * kLn2);
                long double rhs = -(long double)lam_exp * kLn2 + m.eval_log(lt);
                CHECK((double)lhs >= (double)rhs - 1e-12);
            }
        }
    }
}

TEST_CASE("table modulus") {
    std::string dir = OMEGADIM_TEST_DATA_DIR;
    auto good = ModulusSpec::table_from_csv(dir + "/good_table.csv");
    CHECK(good.kind() == ModulusKind::table);
    CHECK(good.concave_certified());
    CHECK(good.omega_exact(BigRat(1, 2)).has_value());

    CHECK_THROWS_AS(ModulusSpec::table_from_csv(dir + "/bad_table.csv"), ValidationError);
    CHECK_THROWS_AS(ModulusSpec::table_from_csv(dir + "/missing.csv"), ValidationError);

    // Query below the tabulated range errors out.
    CHECK_THROWS_AS(good.eval_log(-40.0L), ValidationError);

    EtaReport rep = eta_estimate(good, -5.0L);
    CHECK(rep.tail_low.has_value());
    CHECK(rep.tail_high.has_value());
    CHECK(*rep.tail_low <= *rep.tail_high);

    // Non-concave tables load but are not certified.
    std::vector<std::pair<BigRat, BigRat>> pts = {
        {BigRat(1, 16), BigRat(1, 100)},
        {BigRat(1, 8), BigRat(2, 100)},
        {BigRat(1, 2), BigRat(20, 100)},
        {BigRat(1), BigRat(21, 100)},
    };
    auto bumpy = ModulusSpec::table(pts);
    CHECK(!bumpy.concave_certified());

    std::vector<std::pair<BigRat, BigRat>> nonmono = {
        {BigRat(1, 4), BigRat(1, 2)},
        {BigRat(1, 2), BigRat(1, 4)},
    };
    CHECK_THROWS_AS(ModulusSpec::table(nonmono), ValidationError);
}
