#include "omegadim/dimension.hpp"

#include <algorithm>
#include <cmath>

namespace omegadim {

namespace {

long double log2_int(const BigInt& n) {
    if (sgn(n) <= 0) throw ValidationError("log2 of non-positive count");
    return log2_rat(BigRat(n));
}

struct Fit {
    double slope = 0.0;
    double max_residual = 0.0;
};

Fit ols(const std::vector<long double>& xs, const std::vector<long double>& ys) {
    size_t n = xs.size();
    long double xb = 0, yb = 0;
    for (size_t i = 0; i < n; ++i) {
        xb += xs[i];
        yb += ys[i];
    }
    xb /= n;
    yb /= n;
    long double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xb) * (xs[i] - xb);
        sxy += (xs[i] - xb) * (ys[i] - yb);
    }
    if (sxx == 0) throw ValidationError("regression needs distinct scales");
    Fit fit;
    fit.slope = (double)(sxy / sxx);
    long double icept = yb - (sxy / sxx) * xb;
    for (size_t i = 0; i < n; ++i) {
        long double e = ys[i] - ((sxy / sxx) * xs[i] + icept);
        fit.max_residual = std::max(fit.max_residual, (double)std::fabs((double)e));
    }
    return fit;
}

void finish(DimensionEstimate& est) {
    if (est.exponent < 1.0 || est.exponent > 2.0) est.clamped = true;
}

// Window side for scale r at spectrum parameter theta: the power of two
// nearest r^theta from below, keeping all corners dyadic.
BigRat window_side(const BigRat& r, const BigRat& theta) {
    long double l2r = log2_rat(r);  // < 0
    long double target = l2r * (long double)rat_to_double(theta);
    long e = (long)std::floor(target);
    return pow2_rat(e);
}

}  // namespace

std::vector<BigRat> stratified_centers(int n) {
    std::vector<BigRat> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(BigRat(2 * i + 1) / (2 * n));
    return out;
}

std::vector<BigRat> dyadic_schedule(long from, long to, long step) {
    if (from > to || step < 1) throw ValidationError("bad dyadic schedule");
    std::vector<BigRat> out;
    for (long a = from; a <= to; a += step) out.push_back(pow2_rat(-a));
    return out;
}

std::vector<BigRat> spectrum_schedule(const BigRat& theta, int points, long span_log2) {
    if (points < 2) throw ValidationError("spectrum_schedule: need at least 2 points");
    double gap = 1.0 - rat_to_double(theta);
    if (gap <= 0) throw ValidationError("spectrum_schedule: theta must be below 1");
    std::vector<BigRat> out;
    long prev = 0;
    for (int i = 0; i < points; ++i) {
        double x = 4.0 + (double)i * (double)(span_log2 - 4) / (points - 1);
        long a = (long)std::ceil(x / gap);
        if (a <= prev) a = prev + 1;
        prev = a;
        out.push_back(pow2_rat(-a));
    }
    return out;
}

DimensionEstimate box_dimension(const LazyPLF& f, const std::vector<BigRat>& r_schedule,
                                const CountLimits& limits) {
    if (r_schedule.size() < 4)
        throw ValidationError("box_dimension: need at least 4 scales");
    DimensionEstimate est;
    est.kind = DimKind::box;
    std::vector<long double> xs, ys;
    for (const auto& r : r_schedule) {
        CountRecord rec = mesh_count(f, Window::whole_domain(), r, CountMethod::analytic,
                                     MeshAnchor::origin, limits);
        xs.push_back(-log2_rat(r));
        ys.push_back(log2_int(rec.count));
        est.records.push_back(std::move(rec));
    }
    Fit fit = ols(xs, ys);
    est.exponent = fit.slope;
    est.residual = fit.max_residual;
    est.scale_hi_log2 = (double)-xs.front();
    est.scale_lo_log2 = (double)-xs.back();
    finish(est);
    return est;
}

DimensionEstimate spectrum_estimate(const LazyPLF& f, const BigRat& theta,
                                    const std::vector<BigRat>& centers,
                                    const std::vector<BigRat>& r_schedule,
                                    std::optional<double> eta_reference,
                                    const CountLimits& limits) {
    if (!(theta > 0 && theta < 1))
        throw ValidationError("spectrum_estimate: theta must lie in (0,1)");
    if (centers.empty()) throw ValidationError("spectrum_estimate: need centers");
    DimensionEstimate est;
    est.kind = DimKind::spectrum;
    est.theta = rat_to_double(theta);
    std::vector<long double> xs, ys;
    for (const auto& r : r_schedule) {
        BigRat side = window_side(r, theta);
        if (side >= 1 || side <= r * 2) continue;  // degenerate window: skip scale
        BigInt best(-1);
        CountRecord best_rec;
        for (const auto& cx : centers) {
            Window w = Window::square(cx, f.eval(cx), side);
            CountRecord rec = mesh_count(f, w, r, CountMethod::analytic, MeshAnchor::origin,
                                         limits);
            if (rec.count > best) {
                best = rec.count;
                best_rec = std::move(rec);
            }
        }
        xs.push_back(log2_rat(side) - log2_rat(r));
        ys.push_back(log2_int(best));
        est.records.push_back(std::move(best_rec));
    }
    if (xs.size() < 2) throw ValidationError("spectrum_estimate: not enough usable scales");
    Fit fit = ols(xs, ys);
    est.exponent = fit.slope;
    est.residual = fit.max_residual;
    est.scale_hi_log2 = (double)log2_rat(r_schedule.front());
    est.scale_lo_log2 = (double)log2_rat(r_schedule.back());
    if (eta_reference) {
        est.reference = theoretical_spectrum(*eta_reference, est.theta);
        est.bound = bound_check(est.exponent, est.theta, *eta_reference);
    }
    finish(est);
    return est;
}

std::vector<DimensionEstimate> quasi_assouad_estimate(
    const LazyPLF& f, const std::vector<BigRat>& theta_grid,
    const std::vector<BigRat>& centers, const std::vector<BigRat>& r_schedule,
    std::optional<double> eta_reference, const CountLimits& limits) {
    if (theta_grid.empty()) throw ValidationError("quasi estimate: empty theta grid");
    for (size_t i = 1; i < theta_grid.size(); ++i)
        if (theta_grid[i] <= theta_grid[i - 1])
            throw ValidationError("quasi estimate: theta grid must increase");
    std::vector<DimensionEstimate> curve;
    for (const auto& th : theta_grid) {
        DimensionEstimate e = spectrum_estimate(f, th, centers, r_schedule, eta_reference,
                                                limits);
        e.kind = DimKind::quasi;
        curve.push_back(std::move(e));
    }
    return curve;
}

DimensionEstimate assouad_estimate(const LazyPLF& f,
                                   const std::vector<std::pair<BigRat, BigRat>>& scale_pairs,
                                   const std::vector<BigRat>& centers,
                                   std::optional<double> reference,
                                   const CountLimits& limits) {
    if (scale_pairs.empty()) throw ValidationError("assouad_estimate: need scale pairs");
    if (centers.empty()) throw ValidationError("assouad_estimate: need centers");
    DimensionEstimate est;
    est.kind = DimKind::assouad;
    est.reference = reference;
    double best = 0.0;
    std::vector<std::pair<long double, long double>> samples;
    for (const auto& [r, R] : scale_pairs) {
        if (R < r * 4) throw ValidationError("assouad_estimate: need R/r >= 4");
        for (const auto& cx : centers) {
            Window w = Window::square(cx, f.eval(cx), R);
            CountRecord rec = mesh_count(f, w, r, CountMethod::analytic, MeshAnchor::origin,
                                         limits);
            long double lx = log2_rat(R) - log2_rat(r);
            long double ly = log2_int(rec.count);
            samples.push_back({lx, ly});
            double ex = (double)(ly / lx);
            if (ex > best) best = ex;
            est.records.push_back(std::move(rec));
        }
    }
    est.exponent = best;
    // Top decile by local exponent, regressed, as a stability readout.
    std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
        return a.second / a.first > b.second / b.first;
    });
    size_t dec = std::max<size_t>(2, samples.size() / 10);
    dec = std::min(dec, samples.size());
    if (dec >= 2) {
        std::vector<long double> xs, ys;
        bool distinct = false;
        for (size_t i = 0; i < dec; ++i) {
            xs.push_back(samples[i].first);
            ys.push_back(samples[i].second);
            if (samples[i].first != samples[0].first) distinct = true;
        }
        if (distinct) est.top_decile_slope = ols(xs, ys).slope;
    }
    finish(est);
    return est;
}

StageLawReport spectrum_stage_counts(const SpectrumPlan& plan, const LazyPLF& f,
                                     const CountLimits& limits) {
    StageLawReport rep;
    std::vector<long double> xs, ys;
    for (const auto& st : plan.stages) {
        Window w = spectrum_stage_window(plan, st.k);
        CountRecord rec = mesh_count(f, w, st.tooth_width, CountMethod::analytic,
                                     MeshAnchor::origin, limits);
        StageCount sc;
        sc.k = st.k;
        sc.count = rec.count;
        BigInt phi = floor_quotient(st.oscillation, st.tooth_width);
        if (phi < 1) phi = 1;
        sc.quarter_law_lhs = 4 * rec.count;
        sc.quarter_law_rhs = st.teeth * phi;
        sc.law_pass = sc.quarter_law_lhs >= sc.quarter_law_rhs;
        long double lx = log2_rat(st.width) - log2_rat(st.tooth_width);  // = log2 teeth
        long double ly = log2_int(rec.count);
        sc.window_over_scale_log2 = (double)lx;
        sc.local_exponent = (double)(ly / lx);
        xs.push_back(lx);
        ys.push_back(ly);
        rep.stages.push_back(std::move(sc));
    }
    if (xs.size() >= 2) rep.regressed_exponent = ols(xs, ys).slope;
    else rep.regressed_exponent = rep.stages.empty() ? 0.0 : rep.stages[0].local_exponent;
    double theta = rat_to_double(plan.theta), delta = rat_to_double(plan.delta);
    rep.delta_adjusted_target = 2.0 - (plan.eta - theta + delta) / (1.0 - theta);
    return rep;
}

StageLawReport assouad_stage_counts(const AssouadPlan& plan, const LazyPLF& f,
                                    const CountLimits& limits) {
    StageLawReport rep;
    double prev = 0.0;
    for (const auto& st : plan.stages) {
        Window w = assouad_stage_window(plan, st.k);
        CountRecord rec = mesh_count(f, w, st.tooth_width, CountMethod::analytic,
                                     MeshAnchor::origin, limits);
        StageCount sc;
        sc.k = st.k;
        sc.count = rec.count;
        BigInt m2k1(2 * st.k + 1);
        sc.quarter_law_lhs = 4 * rec.count;
        sc.quarter_law_rhs = m2k1 * m2k1;
        sc.law_pass = sc.quarter_law_lhs >= sc.quarter_law_rhs;
        long double lx = log2_rat(BigRat(m2k1));  // log2(R/r) = log2(2k+1)
        long double ly = log2_int(rec.count);
        sc.window_over_scale_log2 = (double)lx;
        sc.local_exponent = (double)(ly / lx);
        if (!rep.stages.empty() && sc.local_exponent < prev - 1e-12)
            rep.exponents_monotone = false;
        prev = sc.local_exponent;
        rep.stages.push_back(std::move(sc));
    }
    if (!rep.stages.empty()) rep.regressed_exponent = rep.stages.back().local_exponent;
    return rep;
}

BoundCheck bound_check(double exponent, double theta, double eta, double tolerance) {
    BoundCheck out;
    out.exponent = exponent;
    out.theta = theta;
    out.eta = eta;
    out.tolerance = tolerance;
    out.bound = (theta < eta && eta <= 1.0) ? spectrum_upper_bound(eta, theta) : 2.0;
    out.naive_bound = naive_spectrum_bound(eta, theta);
    out.pass = exponent <= out.bound + tolerance && exponent <= out.naive_bound + tolerance;
    return out;
}

}  // namespace omegadim
