#include "omegadim/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace omegadim {

BigInt rat_floor(const BigRat& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

BigInt floor_quotient(const BigRat& x, const BigRat& r) {
    if (sgn(r) <= 0) throw ValidationError("floor_quotient: r must be positive");
    // floor((a/b) / (c/d)) = floor(a*d / (b*c))
    BigInt num = x.get_num() * r.get_den();
    BigInt den = x.get_den() * r.get_num();
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

BigInt ceil_quotient(const BigRat& x, const BigRat& r) {
    if (sgn(r) <= 0) throw ValidationError("ceil_quotient: r must be positive");
    BigInt num = x.get_num() * r.get_den();
    BigInt den = x.get_den() * r.get_num();
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

bool is_multiple(const BigRat& x, const BigRat& r) {
    if (sgn(r) == 0) throw ValidationError("is_multiple: r must be nonzero");
    BigInt num = x.get_num() * r.get_den();
    BigInt den = x.get_den() * r.get_num();
    return mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0;
}

BigRat pow2_rat(long e) {
    BigInt p;
    if (e >= 0) {
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        return BigRat(p);
    }
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    BigRat r(1);
    r /= BigRat(p);
    return r;
}

BigRat rat_pow(const BigRat& x, long e) {
    if (e == 0) return BigRat(1);
    bool inv = e < 0;
    unsigned long k = static_cast<unsigned long>(inv ? -e : e);
    if (inv && sgn(x) == 0) throw ValidationError("rat_pow: zero to negative power");
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), x.get_num().get_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), x.get_den().get_mpz_t(), k);
    BigRat r;
    if (inv) {
        r = BigRat(d);
        r /= BigRat(n);
    } else {
        r = BigRat(n);
        r /= BigRat(d);
    }
    r.canonicalize();
    return r;
}

std::optional<BigRat> rat_root_exact(const BigRat& x, unsigned long n) {
    if (n == 0) throw ValidationError("rat_root_exact: n must be >= 1");
    if (sgn(x) < 0) return std::nullopt;
    BigInt rn, rd;
    int okn = mpz_root(rn.get_mpz_t(), x.get_num().get_mpz_t(), n);
    int okd = mpz_root(rd.get_mpz_t(), x.get_den().get_mpz_t(), n);
    if (!okn || !okd) return std::nullopt;
    BigRat r(rn);
    r /= BigRat(rd);
    return r;
}

BigRat dyadic_root_floor(const BigRat& y, unsigned long n, unsigned long bits) {
    if (sgn(y) <= 0 || n == 0) throw ValidationError("dyadic_root_floor: need y > 0, n >= 1");
    // Largest integer t with t^n <= y * 2^(n*bits); answer t / 2^bits.
    BigInt scaled_num = y.get_num();
    mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), n * bits);
    BigInt target;
    mpz_fdiv_q(target.get_mpz_t(), scaled_num.get_mpz_t(), y.get_den().get_mpz_t());
    BigInt t;
    mpz_root(t.get_mpz_t(), target.get_mpz_t(), n);
    BigInt tn;
    mpz_pow_ui(tn.get_mpz_t(), t.get_mpz_t(), n);
    while (BigRat(tn) > BigRat(scaled_num) / BigRat(y.get_den())) {
        t -= 1;
        mpz_pow_ui(tn.get_mpz_t(), t.get_mpz_t(), n);
    }
    BigRat r(t);
    r /= pow2_rat(static_cast<long>(bits)).get_num();
    r.canonicalize();
    return r;
}

BigInt odd_ceil(const BigRat& x) {
    BigInt c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    if (mpz_even_p(c.get_mpz_t())) c += 1;
    return c;
}

long double log2_rat(const BigRat& x) {
    if (sgn(x) <= 0) throw ValidationError("log2_rat: x must be positive");
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, x.get_num().get_mpz_t());
    double md = mpz_get_d_2exp(&ed, x.get_den().get_mpz_t());
    return (std::log2((long double)mn) + en) - (std::log2((long double)md) + ed);
}

long double ln_rat(const BigRat& x) {
    static const long double kLn2 = 0.693147180559945309417L;
    return log2_rat(x) * kLn2;
}

BigRat parse_rat(const std::string& s) {
    if (s.empty()) throw ValidationError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigRat r;
        if (r.set_str(s, 10) != 0) throw ValidationError("bad rational literal: " + s);
        if (sgn(BigRat(r.get_den())) == 0) throw ValidationError("zero denominator: " + s);
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw ValidationError("bad decimal literal: " + s);
        BigInt num;
        if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
            throw ValidationError("bad decimal literal: " + s);
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        BigRat r(num);
        r /= BigRat(den);
        r.canonicalize();
        return r;
    }
    BigInt n;
    if (mpz_set_str(n.get_mpz_t(), s.c_str(), 10) != 0)
        throw ValidationError("bad integer literal: " + s);
    return BigRat(n);
}

std::string format_rat(const BigRat& x) {
    BigRat c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double rat_to_double(const BigRat& x) {
    if (sgn(x) == 0) return 0.0;
    // mpq_get_d underflows for tiny dyadics; go through log2 when needed.
    double d = mpq_get_d(x.get_mpq_t());
    if (d != 0.0 && std::isfinite(d)) return d;
    long double l2 = log2_rat(abs(x));
    double mag = std::pow(2.0, (double)l2);
    return sgn(x) < 0 ? -mag : mag;
}

}  // namespace omegadim
