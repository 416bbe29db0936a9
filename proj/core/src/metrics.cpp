#include "omegadim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace omegadim {

namespace {

struct SamplePoint {
    BigRat x;
    BigRat fx;
};

// Ratio |df| / omega(|dx|) through log space, safe for |dx| ~ 2^-150000.
double pair_ratio(const ModulusSpec& m, const BigRat& dx, const BigRat& df, bool& skipped) {
    skipped = false;
    if (sgn(df) == 0) return 0.0;
    try {
        long double lw = m.eval_log(ln_rat(abs(BigRat(dx))));
        long double lf = ln_rat(abs(BigRat(df)));
        return (double)std::exp(lf - lw);
    } catch (const ValidationError&) {
        skipped = true;  // table modulus queried outside its range
        return 0.0;
    }
}

std::vector<SamplePoint> gather_points(const LazyPLF& f, PairMethod method, std::uint64_t seed,
                                       int grid_bits) {
    std::vector<BigRat> xs;
    for (const auto& b : f.blocks()) {
        std::visit(
            [&](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    for (const auto& [px, py] : blk.pts) xs.push_back(px);
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    xs.push_back(blk.x0);
                    xs.push_back(blk.x1);
                    // Up to 64 tooth extremes near each edge; a handful inside.
                    BigInt edge = std::min(blk.teeth, BigInt(64));
                    for (BigInt j = 0; j <= edge; j += 1) {
                        xs.push_back(blk.x0 + BigRat(j) * blk.width);
                        xs.push_back(blk.x1 - BigRat(j) * blk.width);
                    }
                    for (int s = 1; s < 8; ++s) {
                        BigInt j = (blk.teeth * s) / 8;
                        xs.push_back(blk.x0 + BigRat(j) * blk.width);
                    }
                } else {
                    xs.push_back(blk.x0);
                    xs.push_back(blk.x1);
                }
            },
            b);
    }
    if (method == PairMethod::grid) {
        std::mt19937_64 rng(seed);
        long n = 1L << grid_bits;
        for (long i = 0; i < n; ++i) {
            std::uint64_t u = rng();
            // (i + u/2^64) / n, exactly.
            BigRat jitter{BigInt(u)};
            jitter /= BigRat(pow2_rat(64));
            BigRat x = (BigRat(i) + jitter) / n;
            if (x >= 0 && x <= 1) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<SamplePoint> pts;
    pts.reserve(xs.size());
    for (auto& x : xs) {
        if (x < 0 || x > 1) continue;
        pts.push_back({x, f.eval(x)});
    }
    return pts;
}

}  // namespace

SeminormEstimate seminorm_omega(const LazyPLF& f, const ModulusSpec& m, PairMethod method,
                                std::uint64_t seed, int grid_bits) {
    SeminormEstimate est;
    est.method = method;
    est.seed = seed;
    if (method == PairMethod::breakpoint_pairs && !m.concave_certified()) {
        // The endpoint reduction leans on concavity; fall back to the grid.
        method = PairMethod::grid;
        est.method = PairMethod::grid;
        est.downgraded = true;
    }
    auto pts = gather_points(f, method, seed, grid_bits);
    double best = 0.0;
    BigRat bx(0), by(0);
    size_t pairs = 0, skipped = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            bool skip = false;
            double r = pair_ratio(m, pts[j].x - pts[i].x, pts[j].fx - pts[i].fx, skip);
            ++pairs;
            if (skip) {
                ++skipped;
                continue;
            }
            if (r > best) {
                best = r;
                bx = pts[i].x;
                by = pts[j].x;
            }
        }
    }
    est.value = best;
    est.witness_x = bx;
    est.witness_y = by;
    est.pair_count = pairs;
    est.skipped_pairs = skipped;
    return est;
}

SeminormEstimate seminorm_omega_on_points(const LazyPLF& f, const ModulusSpec& m,
                                          const std::vector<BigRat>& xs) {
    SeminormEstimate est;
    est.method = PairMethod::grid;
    std::vector<SamplePoint> pts;
    pts.reserve(xs.size());
    for (const auto& x : xs) pts.push_back({x, f.eval(x)});
    double best = 0.0;
    size_t pairs = 0, skipped = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            if (pts[i].x == pts[j].x) continue;
            bool skip = false;
            double r = pair_ratio(m, pts[j].x - pts[i].x, pts[j].fx - pts[i].fx, skip);
            ++pairs;
            if (skip) {
                ++skipped;
                continue;
            }
            if (r > best) {
                best = r;
                est.witness_x = pts[i].x;
                est.witness_y = pts[j].x;
            }
        }
    }
    est.value = best;
    est.pair_count = pairs;
    est.skipped_pairs = skipped;
    return est;
}

std::vector<std::pair<double, double>> little_profile(const LazyPLF& f, const ModulusSpec& m,
                                                      const std::vector<BigRat>& t_grid,
                                                      std::uint64_t seed, int grid_bits) {
    if (t_grid.empty()) return {};
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] <= 0) throw ValidationError("little_profile: t values must be positive");
        if (i > 0 && t_grid[i] >= t_grid[i - 1])
            throw ValidationError("little_profile: t grid must decrease");
    }
    auto pts = gather_points(f, PairMethod::grid, seed, grid_bits);
    // bucket[j] collects pair ratios whose distance fits t_grid[j] but not
    // t_grid[j+1]; suffix maxima then give the nested-set profile.
    std::vector<double> bucket(t_grid.size(), 0.0);
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            BigRat d = pts[j].x - pts[i].x;
            if (d > t_grid.front()) continue;
            // Largest index whose t still admits this distance.
            size_t lo = 0, hi = t_grid.size() - 1, idx = 0;
            while (lo <= hi) {
                size_t mid = (lo + hi) / 2;
                if (t_grid[mid] >= d) {
                    idx = mid;
                    lo = mid + 1;
                } else {
                    if (mid == 0) break;
                    hi = mid - 1;
                }
            }
            bool skip = false;
            double r = pair_ratio(m, d, pts[j].fx - pts[i].fx, skip);
            if (!skip && r > bucket[idx]) bucket[idx] = r;
        }
    }
    std::vector<std::pair<double, double>> out(t_grid.size());
    double running = 0.0;
    for (size_t j = t_grid.size(); j-- > 0;) {
        running = std::max(running, bucket[j]);
        out[j] = {rat_to_double(t_grid[j]), running};
    }
    return out;
}

SeminormEstimate seminorm_lip(const LazyPLF& f) {
    SeminormEstimate est;
    est.method = PairMethod::breakpoint_pairs;
    BigRat best(0);
    for (const auto& b : f.blocks()) {
        std::visit(
            [&](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    for (size_t i = 1; i < blk.pts.size(); ++i) {
                        BigRat s = abs(BigRat((blk.pts[i].second - blk.pts[i - 1].second) /
                                              (blk.pts[i].first - blk.pts[i - 1].first)));
                        if (s > best) {
                            best = s;
                            est.witness_x = blk.pts[i - 1].first;
                            est.witness_y = blk.pts[i].first;
                        }
                    }
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    BigRat s = (blk.y_top - blk.y_bottom) / blk.width;
                    if (s > best) {
                        best = s;
                        est.witness_x = blk.x0;
                        est.witness_y = blk.x0 + blk.width;
                    }
                }
            },
            b);
    }
    est.value = rat_to_double(best);
    est.pair_count = 1;
    return est;
}

BigRat sup_norm_exact(const LazyPLF& f) {
    auto [lo, hi] = f.range();
    return std::max(BigRat(abs(lo)), BigRat(abs(hi)));
}

double sup_norm(const LazyPLF& f) {
    return rat_to_double(sup_norm_exact(f));
}

double omega_norm(const LazyPLF& f, const ModulusSpec& m, PairMethod method,
                  std::uint64_t seed, int grid_bits) {
    return sup_norm(f) + seminorm_omega(f, m, method, seed, grid_bits).value;
}

}  // namespace omegadim
