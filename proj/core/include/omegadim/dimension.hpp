#pragma once

#include <optional>
#include <vector>

#include "omegadim/construct.hpp"
#include "omegadim/mesh.hpp"
#include "omegadim/modulus.hpp"

namespace omegadim {

enum class DimKind { box, spectrum, quasi, assouad };

struct BoundCheck {
    double exponent = 0.0;
    double theta = 0.0, eta = 0.0;
    double bound = 0.0;        // sharp bound, or 2 when theta >= eta
    double naive_bound = 0.0;  // (2-eta)/(1-theta)
    double tolerance = 0.0;
    bool pass = false;
};

BoundCheck bound_check(double exponent, double theta, double eta, double tolerance = 0.05);

struct DimensionEstimate {
    DimKind kind = DimKind::box;
    double theta = 0.0;  // spectrum/quasi only
    double exponent = 0.0;
    bool clamped = false;  // raw exponent fell outside [1,2]
    double residual = 0.0;
    double scale_hi_log2 = 0.0, scale_lo_log2 = 0.0;
    std::optional<double> reference;
    std::optional<double> top_decile_slope;  // assouad only
    std::optional<BoundCheck> bound;         // spectrum/quasi with known eta
    std::vector<CountRecord> records;
};

// Least-squares exponent of log2 N against -log2 r over the whole domain.
// Needs at least 4 scales.
DimensionEstimate box_dimension(const LazyPLF& f, const std::vector<BigRat>& r_schedule,
                                const CountLimits& limits = {});

// For each scale r, the max over centers of the count in Q((x,f(x)), side)
// with side snapped to the dyadic power nearest r^theta from below; the
// exponent regresses log2(max count) on log2(side/r).
DimensionEstimate spectrum_estimate(const LazyPLF& f, const BigRat& theta,
                                    const std::vector<BigRat>& centers,
                                    const std::vector<BigRat>& r_schedule,
                                    std::optional<double> eta_reference = std::nullopt,
                                    const CountLimits& limits = {});

// Spectrum curve over a theta grid plus its value at the largest theta.
std::vector<DimensionEstimate> quasi_assouad_estimate(
    const LazyPLF& f, const std::vector<BigRat>& theta_grid,
    const std::vector<BigRat>& centers, const std::vector<BigRat>& r_schedule,
    std::optional<double> eta_reference = std::nullopt, const CountLimits& limits = {});

// Max over (r,R) pairs and centers of log2 N / log2(R/r); requires R/r >= 4.
DimensionEstimate assouad_estimate(const LazyPLF& f,
                                   const std::vector<std::pair<BigRat, BigRat>>& scale_pairs,
                                   const std::vector<BigRat>& centers,
                                   std::optional<double> reference = std::nullopt,
                                   const CountLimits& limits = {});

// Exact per-stage counts of a construction at its own scales.
struct StageCount {
    int k = 0;
    BigInt count;
    BigInt quarter_law_lhs;  // 4 * count
    BigInt quarter_law_rhs;  // teeth * max(1, floor(osc/r))   (spectrum)
                             // (2k+1)^2                        (assouad)
    bool law_pass = false;
    double window_over_scale_log2 = 0.0;  // log2(window side / r)
    double local_exponent = 0.0;          // log2 count / log2(side/r)
};

struct StageLawReport {
    std::vector<StageCount> stages;
    double regressed_exponent = 0.0;
    double delta_adjusted_target = 0.0;  // spectrum: 2-(eta-theta+delta)/(1-theta)
    bool exponents_monotone = true;      // assouad: local exponent non-decreasing
};

StageLawReport spectrum_stage_counts(const SpectrumPlan& plan, const LazyPLF& f,
                                     const CountLimits& limits = {});
StageLawReport assouad_stage_counts(const AssouadPlan& plan, const LazyPLF& f,
                                    const CountLimits& limits = {});

// Evenly spread x-centers (2i+1)/(2n).
std::vector<BigRat> stratified_centers(int n);

// Dyadic schedule 2^-a for a in [from, to] stepping by `step`.
std::vector<BigRat> dyadic_schedule(long from, long to, long step = 1);

// Dyadic scales chosen so log2(window/r) = a(1-theta) sweeps about
// [4, span_log2]; deeper thetas need deeper scales for stable regressions.
std::vector<BigRat> spectrum_schedule(const BigRat& theta, int points = 5,
                                      long span_log2 = 20);

}  // namespace omegadim
