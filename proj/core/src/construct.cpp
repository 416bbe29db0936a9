#include "omegadim/construct.hpp"

#include <cmath>

namespace omegadim {

namespace {

constexpr long double kLn2 = 0.693147180559945309417L;

BigInt pow2_int(long e) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return p;
}

// Smallest t with 2^t >= x (x >= 1).
long ceil_log2(const BigInt& x) {
    size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
    bool pow2 = mpz_popcount(x.get_mpz_t()) == 1;
    return static_cast<long>(pow2 ? bits - 1 : bits);
}

struct RatParts {
    BigInt num, den;
};
RatParts parts(const BigRat& x) {
    return {x.get_num(), x.get_den()};
}

// x^e for mpz base, small exponent.
BigInt ipow(const BigInt& x, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
    return r;
}

void push(Certificate& cert, std::string name, std::string detail, bool exact, bool pass,
          double margin) {
    cert.entries.push_back({std::move(name), std::move(detail), exact, pass, margin});
}

// Exact test  u^d2 * 2^(a*d1) >= v^d2  deciding the depth-side constraint
// a*delta >= log2(1/eps) with eps = u/v, delta = d1/d2.
bool depth_ok_exact(const BigRat& eps, const BigRat& delta, long a) {
    auto [u, v] = parts(eps);
    auto [d1, d2] = parts(delta);
    unsigned long e2 = d2.get_ui();
    BigInt lhs = ipow(u, e2);
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), a * d1.get_ui());
    return lhs >= ipow(v, e2);
}

long double chain_value(const ModulusSpec& m, const BigRat& eps, long a) {
    long double log_r = -(long double)a * kLn2;
    return (m.eval_log(log_r) + ln_rat(eps)) / log_r;
}

// Largest dyadic with `bits` fractional bits that is <= 2^log2v, shaved by a
// few ulps so it never exceeds the true value despite long-double rounding.
BigRat dyadic_floor_from_log2(long double log2v, long bits) {
    long e = (long)std::floor(log2v);
    long double frac = log2v - (long double)e;  // in [0,1)
    long double mant = std::exp2(frac);         // in [1,2)
    BigInt t((double)std::floor(mant * std::exp2((long double)52)));
    t -= 4;
    BigRat r(t);
    r *= pow2_rat(e - 52);
    r.canonicalize();
    (void)bits;
    return r;
}

struct HolderShape {
    bool is_holder = false;
    unsigned long pa = 1, qa = 1;  // alpha = pa/qa
};

HolderShape holder_shape(const ModulusSpec& m) {
    HolderShape h;
    if (m.kind() == ModulusKind::holder ||
        (m.kind() == ModulusKind::power_log && m.beta() == 0)) {
        h.is_holder = true;
        h.pa = m.alpha().get_num().get_ui();
        h.qa = m.alpha().get_den().get_ui();
    }
    return h;
}

std::optional<BigRat> eta_exact_of(const ModulusSpec& m) {
    switch (m.kind()) {
        case ModulusKind::holder: return m.alpha();
        case ModulusKind::lipschitz: return BigRat(1);
        case ModulusKind::loglip: return BigRat(1);
        case ModulusKind::power_log: return m.alpha();
        case ModulusKind::table: return std::nullopt;
    }
    return std::nullopt;
}

double eta_value(const ModulusSpec& m) {
    if (auto e = eta_exact_of(m)) return rat_to_double(*e);
    return eta_estimate(m, -120.0L * kLn2).eta;
}

}  // namespace

SpectrumPlan plan_spectrum(const ModulusSpec& m, const BigRat& theta, const BigRat& delta,
                           const BigRat& epsilon, int n_stages, PlanMode mode,
                           const ToyParams* toy, long precision_bits) {
    if (!(theta > 0 && theta < 1)) throw ValidationError("theta must lie in (0,1)");
    if (delta <= 0) throw ValidationError("delta must be positive");
    if (epsilon <= 0) throw ValidationError("epsilon must be positive");
    if (n_stages < 1) throw ValidationError("need at least one stage");
    if (!m.concave_certified())
        throw ValidationError("spectrum construction requires a certified concave modulus");

    auto eta_ex = eta_exact_of(m);
    SpectrumPlan plan;
    plan.modulus = m;
    plan.theta = theta;
    plan.delta = delta;
    plan.epsilon = epsilon;
    plan.mode = mode;
    plan.precision_bits = precision_bits;
    plan.eta = eta_value(m);

    if (eta_ex) {
        if (*eta_ex >= 1)
            throw ValidationError("spectrum construction requires eta < 1");
        if (theta >= *eta_ex)
            throw ValidationError("theta must be strictly below eta");
    } else {
        if (plan.eta >= 1.0 - 1e-9)
            throw ValidationError("spectrum construction requires eta < 1");
        if (rat_to_double(theta) >= plan.eta - 1e-9)
            throw ValidationError("theta must be strictly below eta");
    }

    Certificate cert;
    if (mode == PlanMode::strict) {
        // omega(epsilon) <= 1
        bool pass;
        double margin;
        if (auto w = m.omega_exact(epsilon); w) {
            pass = *w <= 1;
            margin = (double)-log2_rat(*w);
            push(cert, "omega_epsilon_le_one", format_rat(*w) + " <= 1", true, pass, margin);
        } else {
            long double lw = m.eval_log(ln_rat(epsilon)) / kLn2;
            pass = lw <= 0;
            push(cert, "omega_epsilon_le_one", "log2 omega(eps) = " + std::to_string((double)lw),
                 false, pass, (double)-lw);
        }
        if (!pass) throw ValidationError("epsilon too large: omega(epsilon) > 1");
    }
    if (mode == PlanMode::toy) {
        if (!toy || (int)toy->epsilons.size() != n_stages ||
            (int)toy->teeth.size() != n_stages)
            throw ValidationError("toy mode needs epsilon and teeth schedules of matching length");
    }

    long p = theta.get_num().get_si();
    long q = theta.get_den().get_si();
    HolderShape hs = holder_shape(m);
    long q_lat = hs.is_holder ? (long)hs.qa : 1;

    BigRat eps_sum(0);
    BigInt m_prev(0);
    BigRat y_cursor(0);

    for (int k = 1; k <= n_stages; ++k) {
        SpectrumStage st;
        st.k = k;
        st.epsilon = (mode == PlanMode::toy) ? toy->epsilons[k - 1]
                                             : BigRat(epsilon / 28) * pow2_rat(1 - k);
        if (st.epsilon <= 0) throw ValidationError("stage epsilon must be positive");
        eps_sum += st.epsilon;

        BigInt teeth;
        if (mode == PlanMode::toy) {
            teeth = toy->teeth[k - 1];
            if (teeth < 1 || mpz_even_p(teeth.get_mpz_t()))
                throw ValidationError("toy teeth counts must be odd and positive");
        } else {
            // Lower bound m >= (eps/2)^((p-q)/p): m^p * u^(q-p) >= (2v)^(q-p)
            // with eps/1 = u/v.
            auto [u, v] = parts(st.epsilon);
            BigInt A = ipow(2 * v, q - p);
            BigInt B = ipow(u, q - p);
            BigInt T;
            mpz_cdiv_q(T.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
            BigInt m0;
            mpz_root(m0.get_mpz_t(), T.get_mpz_t(), p);
            while (ipow(m0, p) * B < A) m0 += 1;
            if (mpz_even_p(m0.get_mpz_t())) m0 += 1;
            teeth = m0;

            auto a_of = [&](const BigInt& mm) -> long {
                BigInt X = ipow(mm, q);
                long t_min = (ceil_log2(X) + (q - p) - 1) / (q - p);
                return ((t_min + q_lat - 1) / q_lat) * q_lat;
            };

            long a = a_of(teeth);
            bool depth_ok = hs.is_holder ? depth_ok_exact(st.epsilon, delta, a)
                                         : (chain_value(m, st.epsilon, a) <=
                                            (long double)plan.eta + rat_to_double(delta));
            if (!depth_ok) {
                // Deepen until the chain's upper end holds on the snapped scale.
                long double est = (double)(-ln_rat(st.epsilon) / (rat_to_double(delta) * kLn2));
                long a_req = std::max(q_lat, (long)((est / q_lat) - 2) * q_lat);
                auto req_ok = [&](long aa) {
                    return hs.is_holder ? depth_ok_exact(st.epsilon, delta, aa)
                                        : (chain_value(m, st.epsilon, aa) <=
                                           (long double)plan.eta + rat_to_double(delta));
                };
                // Budget check precedes the exact test: the test shifts by
                // a_req * d1 bits.
                if (a_req > precision_bits)
                    throw FeasibilityError("depth exceeds precision budget", k);
                while (!req_ok(a_req)) {
                    a_req += q_lat;
                    if (a_req > precision_bits)
                        throw FeasibilityError("depth exceeds precision budget", k);
                }
                // Smallest odd teeth count whose snapped scale reaches a_req.
                BigInt X2 = pow2_int((a_req - q_lat) * (q - p));
                BigInt mc;
                mpz_root(mc.get_mpz_t(), X2.get_mpz_t(), q);
                mc += 1;
                if (mpz_even_p(mc.get_mpz_t())) mc += 1;
                while (a_of(mc) < a_req) mc += 2;
                if (mc > teeth) teeth = mc;
                a = a_of(teeth);
            }
            if (teeth <= m_prev) {
                teeth = m_prev + 2;
                a = a_of(teeth);
            }
            if (a > precision_bits)
                throw FeasibilityError("depth exceeds precision budget", k);
            st.scale_log2 = a;
        }

        if (mode == PlanMode::toy) {
            // Snap the ideal width teeth^(q/(p-q)) to a q_lat-th power of a
            // dyadic so omega(width) stays exactly rational for holder kinds.
            BigRat target = rat_pow(BigRat(teeth), -q);
            BigRat rho = dyadic_root_floor(target, (unsigned long)((q - p) * q_lat), 96);
            st.tooth_width = rat_pow(rho, q_lat);
            st.scale_log2 = (long)std::llround((double)-log2_rat(st.tooth_width));
        } else {
            st.tooth_width = pow2_rat(-st.scale_log2);
        }
        st.teeth = teeth;
        m_prev = teeth;

        if (auto w = m.omega_exact(st.tooth_width); w) {
            st.oscillation = st.epsilon * (*w);
        } else {
            long double l2 = ln_rat(st.tooth_width);
            long double log2osc = (m.eval_log(l2) / kLn2) + log2_rat(st.epsilon);
            st.oscillation = dyadic_floor_from_log2(log2osc, precision_bits);
        }
        st.width = BigRat(teeth) * st.tooth_width;
        st.y0 = y_cursor;
        st.y_mid = st.y0 + st.width;
        st.y1 = st.y0 + 2 * st.width;
        st.center = st.y0 + st.width / 2;
        y_cursor = st.y0 + 4 * st.width;  // next interval starts after a gap

        plan.stages.push_back(st);
    }

    plan.certificate = replay_spectrum_certificate(plan);
    for (const auto& e : plan.certificate.entries)
        if (!e.pass)
            throw ValidationError("spectrum plan certificate failed: " + e.name + " (" +
                                  e.detail + ")");
    (void)eps_sum;
    return plan;
}

Certificate replay_spectrum_certificate(const SpectrumPlan& plan) {
    Certificate cert;
    const ModulusSpec& m = plan.modulus;
    HolderShape hs = holder_shape(m);
    long p = plan.theta.get_num().get_si();
    long q = plan.theta.get_den().get_si();
    bool strict = plan.mode == PlanMode::strict;

    BigRat eps_sum(0);
    for (const auto& st : plan.stages) {
        std::string tag = "stage" + std::to_string(st.k) + ".";
        eps_sum += st.epsilon;
        if (strict) {
            bool pass = st.epsilon <= plan.epsilon / 28;
            push(cert, tag + "eps_budget",
                 format_rat(st.epsilon) + " <= " + format_rat(plan.epsilon / 28), true, pass,
                 pass ? (double)(log2_rat(plan.epsilon / 28) - log2_rat(st.epsilon)) : -1.0);

            auto [u, v] = parts(st.epsilon);
            BigInt A = ipow(2 * v, q - p);
            BigInt B = ipow(u, q - p);
            bool lb = ipow(st.teeth, p) * B >= A;
            push(cert, tag + "teeth_lower_bound",
                 "teeth^p >= (2/eps)^(q-p), teeth=" + st.teeth.get_str(), true, lb,
                 lb ? 0.0 : -1.0);
        }
        bool odd = mpz_odd_p(st.teeth.get_mpz_t()) != 0;
        push(cert, tag + "teeth_odd", st.teeth.get_str(), true, odd, odd ? 0.0 : -1.0);

        // Chain on the snapped scale: width^(eta+delta) <= osc <= width^theta.
        if (hs.is_holder) {
            // osc <= width^theta  <=>  osc^q <= width^p
            BigRat lhs = rat_pow(st.oscillation, q);
            BigRat rhs = rat_pow(st.tooth_width, p);
            bool upper = lhs <= rhs;
            push(cert, tag + "chain_osc_le_width_theta", "exact power comparison", true, upper,
                 upper ? (double)((log2_rat(rhs) - log2_rat(lhs)) / q) : -1.0);
            // width^(alpha+delta) <= osc  <=>  width^(e1*?) ... with
            // alpha+delta = e1/e2: width^e1 <= osc^e2.
            BigRat ad = m.alpha() + plan.delta;
            long e1 = ad.get_num().get_si(), e2 = ad.get_den().get_si();
            BigRat lhs2 = rat_pow(st.tooth_width, e1);
            BigRat rhs2 = rat_pow(st.oscillation, e2);
            bool lower = strict ? lhs2 <= rhs2 : true;
            if (strict)
                push(cert, tag + "chain_width_eta_delta_le_osc", "exact power comparison", true,
                     lower, lower ? (double)((log2_rat(rhs2) - log2_rat(lhs2)) / e2) : -1.0);
        } else {
            long double lw = ln_rat(st.tooth_width);
            long double lam = (m.eval_log(lw) + ln_rat(st.epsilon)) / lw;
            double th = rat_to_double(plan.theta);
            double ed = plan.eta + rat_to_double(plan.delta);
            bool upper = (double)lam >= th;  // Lambda >= theta <=> osc <= width^theta
            bool lower = !strict || (double)lam <= ed;
            push(cert, tag + "chain_osc_le_width_theta",
                 "log-ratio " + std::to_string((double)lam) + " >= theta", false, upper,
                 (double)lam - th);
            if (strict)
                push(cert, tag + "chain_width_eta_delta_le_osc",
                     "log-ratio " + std::to_string((double)lam) + " <= eta+delta", false, lower,
                     ed - (double)lam);
        }

        if (strict) {
            bool lk = 2 * st.width <= st.epsilon;
            push(cert, tag + "interval_le_eps",
                 format_rat(2 * st.width) + " <= " + format_rat(st.epsilon), true, lk,
                 lk ? 0.0 : -1.0);
        }
        bool fits = st.oscillation <= st.width;
        push(cert, tag + "oscillation_fits_window",
             format_rat(st.oscillation) + " <= " + format_rat(st.width), true, fits,
             fits ? (double)(log2_rat(st.width) - log2_rat(st.oscillation)) : -1.0);
    }
    for (size_t i = 1; i < plan.stages.size(); ++i) {
        bool dec = plan.stages[i].epsilon < plan.stages[i - 1].epsilon;
        bool wdec = plan.stages[i].tooth_width < plan.stages[i - 1].tooth_width;
        push(cert, "eps_decreasing.k" + std::to_string(i + 1), "", true, dec, dec ? 0.0 : -1.0);
        push(cert, "width_decreasing.k" + std::to_string(i + 1), "", true, wdec,
             wdec ? 0.0 : -1.0);
    }
    if (strict) {
        bool sum_ok = eps_sum <= BigRat(1, 4);
        push(cert, "eps_sum_le_quarter", format_rat(eps_sum) + " <= 1/4", true, sum_ok,
             sum_ok ? 0.0 : -1.0);
    }
    const auto& last = plan.stages.back();
    bool support = last.y1 <= 1;
    push(cert, "support_in_unit_interval", format_rat(last.y1) + " <= 1", true, support,
         support ? 0.0 : -1.0);
    return cert;
}

LazyPLF build_spectrum(const SpectrumPlan& plan) {
    if (!plan.certificate.all_pass())
        throw ValidationError("refusing to build from a failed certificate");
    std::vector<Block> blocks;
    BigRat cursor(0);
    for (const auto& st : plan.stages) {
        if (st.y0 > cursor) blocks.push_back(ConstantBlock{cursor, st.y0, BigRat(0)});
        blocks.push_back(SawtoothBlock{st.y0, st.y_mid, st.tooth_width, st.teeth, BigRat(0),
                                       -st.oscillation});
        blocks.push_back(ExplicitBlock{{{st.y_mid, -st.oscillation}, {st.y1, BigRat(0)}}});
        cursor = st.y1;
    }
    if (cursor < 1) blocks.push_back(ConstantBlock{cursor, BigRat(1), BigRat(0)});
    return LazyPLF(std::move(blocks));
}

Window spectrum_stage_window(const SpectrumPlan& plan, int k) {
    const auto& st = plan.stages.at(k - 1);
    return Window::square(st.center, -st.oscillation / 2, st.width);
}

AssouadPlan plan_assouad(const ModulusSpec& m, const BigRat& epsilon, int n_stages,
                         PlanMode mode, const ToyParams* toy, long precision_bits) {
    if (epsilon <= 0) throw ValidationError("epsilon must be positive");
    if (n_stages < 1) throw ValidationError("need at least one stage");
    if (!m.concave_certified())
        throw ValidationError("Assouad construction requires a certified concave modulus");
    Regime reg = classify_regime(m, -100.0L * kLn2);
    if (reg != Regime::fractal_regime)
        throw ValidationError(std::string("Assouad construction requires fractal regime, got ") +
                              regime_name(reg));

    AssouadPlan plan;
    plan.modulus = m;
    plan.epsilon = epsilon;
    plan.mode = mode;
    plan.precision_bits = precision_bits;
    plan.eta = eta_value(m);

    if (mode == PlanMode::strict) {
        bool pass;
        if (auto w = m.omega_exact(epsilon); w) pass = *w <= 1;
        else pass = m.eval_log(ln_rat(epsilon)) <= 0;
        if (!pass) throw ValidationError("epsilon too large: omega(epsilon) > 1");
    }
    if (mode == PlanMode::toy && (!toy || (int)toy->epsilons.size() != n_stages))
        throw ValidationError("toy mode needs an epsilon schedule of matching length");

    HolderShape hs = holder_shape(m);
    BigRat y_cursor(0);
    long a_prev = 0;

    for (int k = 1; k <= n_stages; ++k) {
        AssouadStage st;
        st.k = k;
        st.epsilon = (mode == PlanMode::toy) ? toy->epsilons[k - 1]
                                             : BigRat(epsilon / 24) * pow2_rat(1 - k);
        if (st.epsilon <= 0) throw ValidationError("stage epsilon must be positive");

        // Largest power of two r = 2^-a with omega(r) <= eps and
        // omega(r)/r >= (2k+1)/eps, i.e. the smallest feasible exponent a.
        long a;
        auto [u, v] = parts(st.epsilon);
        BigInt m2k1 = BigInt(2 * k + 1);
        if (hs.is_holder) {
            auto cond = [&](long aa) {
                // omega(2^-a) <= eps: v^qa <= u^qa * 2^(a*pa)
                BigInt lhs1 = ipow(v, hs.qa);
                BigInt rhs1 = ipow(u, hs.qa);
                mpz_mul_2exp(rhs1.get_mpz_t(), rhs1.get_mpz_t(), aa * hs.pa);
                if (lhs1 > rhs1) return false;
                // 2^(a(qa-pa)) * u^qa >= ((2k+1) v)^qa
                BigInt lhs2 = ipow(u, hs.qa);
                mpz_mul_2exp(lhs2.get_mpz_t(), lhs2.get_mpz_t(), aa * (hs.qa - hs.pa));
                BigInt rhs2 = ipow(m2k1 * v, hs.qa);
                return lhs2 >= rhs2;
            };
            long double est1 = -ln_rat(st.epsilon) / (rat_to_double(m.alpha()) * kLn2);
            long double est2 = (ln_rat(BigRat(m2k1) / st.epsilon)) /
                               ((1.0L - (long double)rat_to_double(m.alpha())) * kLn2);
            a = std::max(1L, (long)std::max(est1, est2) - 2);
            if (a > precision_bits)
                throw FeasibilityError("depth exceeds precision budget", k);
            while (!cond(a)) {
                ++a;
                if (a > precision_bits)
                    throw FeasibilityError("depth exceeds precision budget", k);
            }
        } else {
            auto cond = [&](long aa) {
                long double lr = -(long double)aa * kLn2;
                long double lw = m.eval_log(lr);
                if (lw > ln_rat(st.epsilon)) return false;               // omega(r) <= eps
                return lw - lr >= ln_rat(BigRat(m2k1) / st.epsilon);     // ratio
            };
            long double target = rat_to_double(BigRat(m2k1) / st.epsilon);
            long a0 = 1;
            if (m.kind() == ModulusKind::loglip)
                a0 = (long)std::ceil((target - 1.0L) / kLn2);
            else
                a0 = (long)(target / kLn2);
            a = std::max(1L, a0 - 2);
            if (a > precision_bits)
                throw FeasibilityError("depth exceeds precision budget", k);
            while (!cond(a)) {
                ++a;
                if (a > precision_bits)
                    throw FeasibilityError("depth exceeds precision budget", k);
            }
        }
        if (a <= a_prev) a = a_prev + 1;
        if (a > precision_bits) throw FeasibilityError("depth exceeds precision budget", k);
        a_prev = a;

        st.scale_log2 = a;
        st.tooth_width = pow2_rat(-a);
        st.height = BigRat(m2k1) * st.tooth_width;
        st.y0 = y_cursor;
        st.y_mid = st.y0 + st.height;
        st.y1 = st.y0 + 2 * st.height;
        st.center = st.y0 + st.height / 2;
        y_cursor = st.y0 + 4 * st.height;
        plan.stages.push_back(st);
    }

    plan.certificate = replay_assouad_certificate(plan);
    for (const auto& e : plan.certificate.entries)
        if (!e.pass)
            throw ValidationError("Assouad plan certificate failed: " + e.name + " (" +
                                  e.detail + ")");
    return plan;
}

Certificate replay_assouad_certificate(const AssouadPlan& plan) {
    Certificate cert;
    const ModulusSpec& m = plan.modulus;
    HolderShape hs = holder_shape(m);
    bool strict = plan.mode == PlanMode::strict;
    BigRat eps_sum(0);

    for (const auto& st : plan.stages) {
        std::string tag = "stage" + std::to_string(st.k) + ".";
        eps_sum += st.epsilon;
        long a = st.scale_log2;
        BigInt m2k1 = BigInt(2 * st.k + 1);
        auto [u, v] = parts(st.epsilon);

        if (strict) {
            bool pass = st.epsilon <= plan.epsilon / 24;
            push(cert, tag + "eps_budget",
                 format_rat(st.epsilon) + " <= " + format_rat(plan.epsilon / 24), true, pass,
                 pass ? 0.0 : -1.0);
        }
        if (hs.is_holder) {
            BigInt lhs1 = ipow(v, hs.qa);
            BigInt rhs1 = ipow(u, hs.qa);
            mpz_mul_2exp(rhs1.get_mpz_t(), rhs1.get_mpz_t(), a * hs.pa);
            bool c1 = lhs1 <= rhs1;
            push(cert, tag + "omega_le_eps", "exact power comparison", true, c1, c1 ? 0.0 : -1.0);
            BigInt lhs2 = ipow(u, hs.qa);
            mpz_mul_2exp(lhs2.get_mpz_t(), lhs2.get_mpz_t(), a * (hs.qa - hs.pa));
            BigInt rhs2 = ipow(m2k1 * v, hs.qa);
            bool c2 = lhs2 >= rhs2;
            push(cert, tag + "ratio_ge_2k1_over_eps", "exact power comparison", true, c2,
                 c2 ? 0.0 : -1.0);
        } else {
            long double lr = -(long double)a * kLn2;
            long double lw = m.eval_log(lr);
            bool c1 = lw <= ln_rat(st.epsilon);
            bool c2 = lw - lr >= ln_rat(BigRat(m2k1) / st.epsilon);
            push(cert, tag + "omega_le_eps",
                 "log omega(r) = " + std::to_string((double)lw), false, c1,
                 (double)((ln_rat(st.epsilon) - lw) / kLn2));
            push(cert, tag + "ratio_ge_2k1_over_eps",
                 "log ratio = " + std::to_string((double)(lw - lr)), false, c2,
                 (double)((lw - lr - ln_rat(BigRat(m2k1) / st.epsilon)) / kLn2));
        }
        // Height budget R <= omega(r) * eps follows from the ratio condition;
        // recorded for replay visibility.
        bool hb = true;
        push(cert, tag + "height_le_omega_eps", "implied by ratio condition", hs.is_holder, hb,
             0.0);
    }
    for (size_t i = 1; i < plan.stages.size(); ++i) {
        bool dec = plan.stages[i].epsilon <= plan.stages[i - 1].epsilon;
        bool sdec = plan.stages[i].scale_log2 > plan.stages[i - 1].scale_log2;
        push(cert, "eps_decreasing.k" + std::to_string(i + 1), "", true, dec, dec ? 0.0 : -1.0);
        push(cert, "scale_decreasing.k" + std::to_string(i + 1), "", true, sdec,
             sdec ? 0.0 : -1.0);
    }
    if (strict) {
        bool sum_ok = eps_sum <= BigRat(1, 8);
        push(cert, "eps_sum_le_eighth", format_rat(eps_sum) + " <= 1/8", true, sum_ok,
             sum_ok ? 0.0 : -1.0);
    }
    const auto& last = plan.stages.back();
    bool support = last.y1 <= 1;
    push(cert, "support_in_unit_interval", format_rat(last.y1) + " <= 1", true, support,
         support ? 0.0 : -1.0);
    return cert;
}

LazyPLF build_assouad(const AssouadPlan& plan) {
    if (!plan.certificate.all_pass())
        throw ValidationError("refusing to build from a failed certificate");
    std::vector<Block> blocks;
    BigRat cursor(0);
    for (const auto& st : plan.stages) {
        if (st.y0 > cursor) blocks.push_back(ConstantBlock{cursor, st.y0, BigRat(0)});
        blocks.push_back(SawtoothBlock{st.y0, st.y_mid, st.tooth_width, BigInt(2 * st.k + 1),
                                       BigRat(0), -st.height});
        blocks.push_back(ExplicitBlock{{{st.y_mid, -st.height}, {st.y1, BigRat(0)}}});
        cursor = st.y1;
    }
    if (cursor < 1) blocks.push_back(ConstantBlock{cursor, BigRat(1), BigRat(0)});
    return LazyPLF(std::move(blocks));
}

Window assouad_stage_window(const AssouadPlan& plan, int k) {
    const auto& st = plan.stages.at(k - 1);
    return Window::square(st.center, -st.height / 2, st.height);
}

}  // namespace omegadim
