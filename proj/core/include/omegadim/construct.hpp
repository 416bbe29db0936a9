#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omegadim/mesh.hpp"
#include "omegadim/modulus.hpp"
#include "omegadim/plf.hpp"

namespace omegadim {

enum class PlanMode { strict, toy };

// One verified inequality with its margin. Exact entries were decided in
// integer/rational arithmetic; the rest quote long-double log-space values.
struct CertEntry {
    std::string name;
    std::string detail;
    bool exact = false;
    bool pass = false;
    double margin_log2 = 0.0;  // slack in doublings; >= 0 when pass
};

struct Certificate {
    std::vector<CertEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

// Stage of the spectrum construction: a sawtooth of `teeth` odd teeth of
// width 2^-scale_log2 on the first half of its interval, oscillating by
// eps * omega(width), followed by a linear return to the base level.
struct SpectrumStage {
    int k = 0;
    BigRat epsilon;
    BigInt teeth;
    long scale_log2 = 0;
    BigRat tooth_width;
    BigRat oscillation;
    BigRat width;        // sawtooth extent = teeth * tooth_width
    BigRat y0, y_mid, y1;
    BigRat center;       // x_k = midpoint of the sawtooth extent
};

struct SpectrumPlan {
    ModulusSpec modulus = ModulusSpec::lipschitz();
    BigRat theta, delta, epsilon;
    PlanMode mode = PlanMode::strict;
    double eta = 0.0;
    long precision_bits = 128;
    std::vector<SpectrumStage> stages;
    Certificate certificate;
};

// Stage of the Assouad construction: 2k+1 teeth of width 2^-scale_log2,
// oscillation height (2k+1) * width, then a unit-slope return ramp.
struct AssouadStage {
    int k = 0;
    BigRat epsilon;
    long scale_log2 = 0;
    BigRat tooth_width;
    BigRat height;       // R_k = (2k+1) * tooth_width
    BigRat y0, y_mid, y1;
    BigRat center;
};

struct AssouadPlan {
    ModulusSpec modulus = ModulusSpec::lipschitz();
    BigRat epsilon;
    PlanMode mode = PlanMode::strict;
    double eta = 0.0;
    long precision_bits = 1 << 20;
    std::vector<AssouadStage> stages;
    Certificate certificate;
};

// User-supplied schedules for toy mode (budget and depth rules waived).
struct ToyParams {
    std::vector<BigRat> epsilons;
    std::vector<BigInt> teeth;  // spectrum only
};

SpectrumPlan plan_spectrum(const ModulusSpec& m, const BigRat& theta, const BigRat& delta,
                           const BigRat& epsilon, int n_stages, PlanMode mode,
                           const ToyParams* toy = nullptr, long precision_bits = 128);

AssouadPlan plan_assouad(const ModulusSpec& m, const BigRat& epsilon, int n_stages,
                         PlanMode mode, const ToyParams* toy = nullptr,
                         long precision_bits = 1 << 20);

// Assembles the piecewise-linear function over [0,1] (base function 0).
LazyPLF build_spectrum(const SpectrumPlan& plan);
LazyPLF build_assouad(const AssouadPlan& plan);

// The square window Q centered on the stage's mid-tooth graph point, with
// side equal to the stage's sawtooth extent (spectrum) or height (Assouad).
Window spectrum_stage_window(const SpectrumPlan& plan, int k);
Window assouad_stage_window(const AssouadPlan& plan, int k);

// Re-verifies every certificate inequality from the stage values alone.
Certificate replay_spectrum_certificate(const SpectrumPlan& plan);
Certificate replay_assouad_certificate(const AssouadPlan& plan);

}  // namespace omegadim
