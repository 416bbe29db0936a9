#pragma once

#include <cstdint>
#include <vector>

#include "omegadim/modulus.hpp"
#include "omegadim/plf.hpp"

namespace omegadim {

enum class PairMethod { breakpoint_pairs, grid };

// Certified lower bound of a seminorm: the witness pair reproduces `value`
// exactly on re-evaluation. Never an upper bound; the true supremum over a
// sawtooth family is not reducible to finitely many pairs.
struct SeminormEstimate {
    double value = 0.0;
    BigRat witness_x{0}, witness_y{0};
    PairMethod method = PairMethod::breakpoint_pairs;
    bool is_lower_bound = true;
    bool downgraded = false;  // breakpoint method on a non-concave modulus
    size_t pair_count = 0;
    size_t skipped_pairs = 0;  // pairs below a table modulus' range
    std::uint64_t seed = 0;
};

// Lower-bound estimate of sup |f(x)-f(y)| / omega(|x-y|). The pair set takes
// all block endpoints, up to 64 tooth extremes at each sawtooth edge plus a
// sparse selection inside, and (grid method) a seeded stratified sample of
// 2^grid_bits points; adjacent tooth extremes enter in closed form.
SeminormEstimate seminorm_omega(const LazyPLF& f, const ModulusSpec& m,
                                PairMethod method = PairMethod::grid,
                                std::uint64_t seed = 7, int grid_bits = 12);

// Same estimator over all pairs of caller-chosen abscissae (for properties
// that need identical pair sets across functions).
SeminormEstimate seminorm_omega_on_points(const LazyPLF& f, const ModulusSpec& m,
                                          const std::vector<BigRat>& xs);

// Locality profile: for each t (decreasing), the max pair ratio restricted to
// |x-y| <= t over one nested pair set, so the curve is non-increasing by
// construction.
std::vector<std::pair<double, double>> little_profile(const LazyPLF& f, const ModulusSpec& m,
                                                      const std::vector<BigRat>& t_grid,
                                                      std::uint64_t seed = 7,
                                                      int grid_bits = 12);

// Exact for piecewise-linear functions: the maximum absolute slope.
SeminormEstimate seminorm_lip(const LazyPLF& f);

BigRat sup_norm_exact(const LazyPLF& f);
double sup_norm(const LazyPLF& f);

// ||f||_omega estimate: exact sup norm plus the seminorm lower bound.
double omega_norm(const LazyPLF& f, const ModulusSpec& m,
                  PairMethod method = PairMethod::grid, std::uint64_t seed = 7,
                  int grid_bits = 12);

}  // namespace omegadim
