#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace omegadim {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Raised for malformed or out-of-contract inputs (CLI exit code 2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a request exceeds the configured precision/feasibility budget
// (CLI exit code 2). Carries the offending stage index when applicable.
struct FeasibilityError : std::runtime_error {
    int stage = -1;
    FeasibilityError(const std::string& msg, int stage_index = -1)
        : std::runtime_error(msg), stage(stage_index) {}
};

// floor(x) of a rational.
BigInt rat_floor(const BigRat& x);

// floor(x / r) without materialising the quotient. r > 0.
BigInt floor_quotient(const BigRat& x, const BigRat& r);

// ceil(x / r). r > 0.
BigInt ceil_quotient(const BigRat& x, const BigRat& r);

// True iff x is an integer multiple of r. r != 0.
bool is_multiple(const BigRat& x, const BigRat& r);

// 2^e as an exact rational; e may be negative and large (|e| up to millions).
BigRat pow2_rat(long e);

// x^e for integral e (e may be negative; x != 0 for negative e).
BigRat rat_pow(const BigRat& x, long e);

// Exact n-th root if x is a perfect n-th power of a rational.
std::optional<BigRat> rat_root_exact(const BigRat& x, unsigned long n);

// Largest dyadic t/2^bits with (t/2^bits)^n <= y. Requires y > 0, n >= 1.
BigRat dyadic_root_floor(const BigRat& y, unsigned long n, unsigned long bits);

// Smallest odd integer >= x.
BigInt odd_ceil(const BigRat& x);

// log2 of a positive rational, accurate to ~1e-18 relative.
long double log2_rat(const BigRat& x);
long double ln_rat(const BigRat& x);

// Parses "p/q", plain integers, and finite decimals ("0.25") exactly.
BigRat parse_rat(const std::string& s);

// Canonical "p/q" (or "p" when q == 1).
std::string format_rat(const BigRat& x);

double rat_to_double(const BigRat& x);

}  // namespace omegadim
