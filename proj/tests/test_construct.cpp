#include <doctest.h>

#include "omegadim/dimension.hpp"

using namespace omegadim;

namespace {

SpectrumPlan strict_spectrum(const char* delta, int stages) {
    return plan_spectrum(ModulusSpec::parse("holder:1/2"), BigRat(1, 4), parse_rat(delta),
                         BigRat(1, 10), stages, PlanMode::strict);
}

}  // namespace

TEST_CASE("strict spectrum plan reproduces the pinned stage-1 parameters") {
    SpectrumPlan p = strict_spectrum("0.5", 3);
    CHECK(p.stages.size() == 3);
    const auto& s1 = p.stages[0];
    CHECK(s1.epsilon == BigRat(1, 280));
    CHECK(s1.teeth == 175616001);  // smallest odd >= (eps/2)^(-3) = 560^3
    CHECK(s1.scale_log2 == 38);
    CHECK(s1.tooth_width == pow2_rat(-38));
    CHECK(s1.oscillation == BigRat(1, 280) * pow2_rat(-19));
    CHECK(s1.y0 == 0);
    CHECK(s1.y_mid == s1.width);
    CHECK(s1.center * 2 == s1.y_mid);
    CHECK(p.certificate.all_pass());

    // Stages decrease in scale and stay inside [0,1], pairwise disjoint.
    for (size_t i = 1; i < p.stages.size(); ++i) {
        CHECK(p.stages[i].scale_log2 > p.stages[i - 1].scale_log2);
        CHECK(p.stages[i].y0 > p.stages[i - 1].y1);
    }
    CHECK(p.stages.back().y1 <= 1);
}

TEST_CASE("chain-bound stage selection under a tighter delta") {
    SpectrumPlan p = strict_spectrum("0.2", 3);
    CHECK(p.stages[0].teeth == BigInt(1) + (BigInt(1) << 30));
    CHECK(p.stages[0].scale_log2 == 42);
    CHECK(p.stages[1].teeth == BigInt(1) + (BigInt(1) << 33));
    CHECK(p.stages[2].scale_log2 == 52);
}

TEST_CASE("theta at or above eta is rejected") {
    CHECK_THROWS_AS(plan_spectrum(ModulusSpec::parse("holder:0.5"), parse_rat("0.7"),
                                  BigRat(1, 2), BigRat(1, 10), 1, PlanMode::strict),
                    ValidationError);
    CHECK_THROWS_AS(plan_spectrum(ModulusSpec::parse("holder:0.5"), BigRat(1, 2), BigRat(1, 2),
                                  BigRat(1, 10), 1, PlanMode::strict),
                    ValidationError);
    // eta = 1 moduli have no spectrum construction.
    CHECK_THROWS_AS(plan_spectrum(ModulusSpec::loglip(), BigRat(1, 4), BigRat(1, 2),
                                  BigRat(1, 10), 1, PlanMode::strict),
                    ValidationError);
}

TEST_CASE("toy spectrum stage matches desk arithmetic") {
    ToyParams toy;
    toy.epsilons = {BigRat(1, 10)};
    toy.teeth = {BigInt(9)};
    SpectrumPlan p = plan_spectrum(ModulusSpec::parse("holder:1/2"), BigRat(1, 4),
                                   BigRat(1, 2), BigRat(1, 10), 1, PlanMode::toy, &toy);
    const auto& st = p.stages[0];
    // tooth width ~ 9^(-4/3), snapped down to a square of a dyadic
    CHECK(rat_to_double(st.tooth_width) == doctest::Approx(0.053416650752).epsilon(1e-9));
    CHECK(rat_to_double(st.width) == doctest::Approx(0.48074985677).epsilon(1e-9));
    CHECK(rat_to_double(st.oscillation) == doctest::Approx(0.023112042478).epsilon(1e-9));
    CHECK(rat_to_double(st.center) == doctest::Approx(0.24037492838).epsilon(1e-9));
    // and within print precision of the worked values 0.053419 / 0.0231129
    CHECK(rat_to_double(st.tooth_width) == doctest::Approx(0.053419).epsilon(1e-4));
    CHECK(rat_to_double(st.oscillation) == doctest::Approx(0.0231129).epsilon(1e-3));

    LazyPLF f = build_spectrum(p);
    CHECK(f.eval(st.y0) == 0);
    CHECK(f.eval(st.y_mid) == -st.oscillation);
    CHECK(f.eval(st.y1) == 0);
    CHECK(f.eval(st.center) == -st.oscillation / 2);
    CHECK(rat_to_double(f.eval(st.center)) == doctest::Approx(-0.0115560212).epsilon(1e-8));

    // Oscillation over the stage interval is exactly [-osc, 0].
    auto [lo, hi] = f.column_span(st.y0, st.y1);
    CHECK(lo == -st.oscillation);
    CHECK(hi == 0);
}

TEST_CASE("built strict function oscillates exactly between 0 and -osc per stage") {
    SpectrumPlan p = strict_spectrum("0.5", 2);
    LazyPLF f = build_spectrum(p);
    for (const auto& st : p.stages) {
        auto [lo, hi] = f.column_span(st.y0, st.y1);
        CHECK(lo == -st.oscillation);
        CHECK(hi == 0);
        CHECK(f.eval(st.center) == -st.oscillation / 2);
    }
}

TEST_CASE("strict Assouad plan picks the largest feasible power of two") {
    AssouadPlan p = plan_assouad(ModulusSpec::parse("holder:1/2"), BigRat(1, 10), 30,
                                 PlanMode::strict);
    CHECK(p.stages.size() == 30);
    CHECK(p.stages[0].epsilon == BigRat(1, 240));
    // omega(r)/r >= 3/eps forces r <= (eps/3)^2 = 1/518400
    CHECK(p.stages[0].scale_log2 == 19);
    CHECK(p.stages[0].height == BigRat(3) * pow2_rat(-19));
    CHECK(p.certificate.all_pass());
    for (size_t i = 1; i < p.stages.size(); ++i)
        CHECK(p.stages[i].scale_log2 > p.stages[i - 1].scale_log2);
    CHECK(p.stages.back().y1 <= 1);

    LazyPLF f = build_assouad(p);
    const auto& s3 = p.stages[2];
    auto [lo, hi] = f.column_span(s3.y0, s3.y1);
    CHECK(lo == -s3.height);
    CHECK(hi == 0);
    // Tooth slope magnitude is 2k+1.
    CHECK(f.max_abs_slope() == BigRat(61));  // k = 30
}

TEST_CASE("Assouad construction demands the fractal regime") {
    CHECK_THROWS_AS(plan_assouad(ModulusSpec::lipschitz(), BigRat(1, 10), 3, PlanMode::strict),
                    ValidationError);
    CHECK_THROWS_AS(plan_assouad(ModulusSpec::parse("powerlog:1.5:0"), BigRat(1, 10), 3,
                                 PlanMode::strict),
                    ValidationError);
}

TEST_CASE("loglip Assouad scales and the precision budget") {
    AssouadPlan p = plan_assouad(ModulusSpec::loglip(), BigRat(1, 10), 2, PlanMode::strict);
    CHECK(p.stages[0].scale_log2 == 1038);
    CHECK(p.stages[1].scale_log2 == 3462);

    try {
        plan_assouad(ModulusSpec::loglip(), BigRat(1, 10), 30, PlanMode::strict, nullptr,
                     1 << 20);
        FAIL("expected FeasibilityError");
    } catch (const FeasibilityError& e) {
        CHECK(e.stage == 9);  // first stage whose exponent exceeds 2^20 bits
    }
}

TEST_CASE("toy stage windows: analytic counts equal brute force") {
    ToyParams toy;
    toy.epsilons = {BigRat(1, 10)};
    toy.teeth = {BigInt(99)};
    SpectrumPlan p = plan_spectrum(ModulusSpec::parse("holder:1/2"), BigRat(1, 4),
                                   BigRat(1, 2), BigRat(1, 10), 1, PlanMode::toy, &toy);
    LazyPLF f = build_spectrum(p);
    StageLawReport rep = spectrum_stage_counts(p, f);
    REQUIRE(rep.stages.size() == 1);
    CHECK(rep.stages[0].law_pass);
    Window w = spectrum_stage_window(p, 1);
    CountRecord brute = mesh_count(f, w, p.stages[0].tooth_width, CountMethod::brute);
    CHECK(rep.stages[0].count == brute.count);

    ToyParams atoy;
    atoy.epsilons = {BigRat(1, 10), BigRat(1, 20)};
    AssouadPlan ap = plan_assouad(ModulusSpec::parse("holder:1/2"), BigRat(1, 10), 2,
                                  PlanMode::toy, &atoy);
    LazyPLF af = build_assouad(ap);
    StageLawReport arep = assouad_stage_counts(ap, af);
    for (const auto& sc : arep.stages) {
        Window aw = assouad_stage_window(ap, sc.k);
        CountRecord ab = mesh_count(af, aw, ap.stages[sc.k - 1].tooth_width,
                                    CountMethod::brute);
        CHECK(sc.count == ab.count);
    }
}

TEST_CASE("certificate replay catches tampering") {
    SpectrumPlan p = strict_spectrum("0.5", 1);
    p.stages[0].teeth -= 1;  // now even and below the lower bound
    Certificate c = replay_spectrum_certificate(p);
    CHECK(!c.all_pass());
}

TEST_CASE("spectrum depth errors carry the offending stage") {
    try {
        plan_spectrum(ModulusSpec::parse("holder:1/2"), BigRat(1, 4), parse_rat("0.01"),
                      BigRat(1, 10), 1, PlanMode::strict, nullptr, 128);
        FAIL("expected FeasibilityError");
    } catch (const FeasibilityError& e) {
        CHECK(e.stage == 1);
    }
}
