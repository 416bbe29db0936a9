#include "omegadim/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <vector>

namespace omegadim {

namespace {

struct VClip {
    BigRat lo, hi;
};

struct Ctx {
    const LazyPLF& f;
    BigRat r;
    BigRat X0, X1;   // closed window x-range within the function's coverage
    BigRat fold_x;   // domain end: its point folds into the preceding column
    std::optional<VClip> vc;
    const CountLimits& limits;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

// Rows met by an attained span, after vertical clipping. The lo side needs no
// on-line adjustment: floor is right-continuous, so values just above an
// unattained infimum land in the same row.
BigInt cells_of(const Ctx& c, SpanInfo s) {
    if (c.vc) {
        const VClip& v = *c.vc;
        if (s.lo > v.hi || s.hi < v.lo) return 0;
        if (s.hi == v.lo && !s.hi_attained) return 0;
        if (s.lo == v.hi && !s.lo_attained) return 0;
        if (s.lo < v.lo) {
            s.lo = v.lo;
            s.lo_attained = true;
        }
        if (s.hi > v.hi) {
            s.hi = v.hi;
            s.hi_attained = true;
        }
    }
    if (s.lo > s.hi) return 0;
    if (s.lo == s.hi && !(s.lo_attained || s.hi_attained)) return 0;
    BigInt hi_row = floor_quotient(s.hi, c.r);
    if (!s.hi_attained && is_multiple(s.hi, c.r)) hi_row -= 1;
    BigInt cells = hi_row - floor_quotient(s.lo, c.r) + 1;
    if (cells < 0) return 0;
    return cells;
}

// One column [n r, (n+1) r) clamped by the window; the window's right edge is
// closed. Works for edge and interior columns alike.
BigInt column_count(const Ctx& c, const BigInt& n) {
    BigRat col_lo = BigRat(n) * c.r;
    BigRat col_hi = col_lo + c.r;
    BigRat s = std::max(c.X0, col_lo);
    BigRat e = std::min(c.X1, col_hi);
    if (s > e) return 0;
    bool right_closed = (e == c.X1);
    if (s == e && !right_closed) return 0;
    return cells_of(c, c.f.span_over(s, e, right_closed));
}

// #{ k in [k1,k2] : A + B k is an integer }.
BigInt lattice_count(const BigRat& A, const BigRat& B, const BigInt& k1, const BigInt& k2) {
    if (k1 > k2) return 0;
    BigInt a1 = A.get_num(), a2 = A.get_den();
    BigInt b1 = B.get_num(), b2 = B.get_den();
    BigInt M = a2 * b2;
    BigInt u = (b1 * a2) % M;
    if (u < 0) u += M;
    BigInt v = (-(a1 * b2)) % M;
    if (v < 0) v += M;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), M.get_mpz_t());
    if (!mpz_divisible_p(v.get_mpz_t(), g.get_mpz_t())) return 0;
    BigInt Mp = M / g;
    if (Mp == 1) return k2 - k1 + 1;
    BigInt up = u / g, vp = v / g;
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), up.get_mpz_t(), Mp.get_mpz_t()) == 0)
        throw InternalError("lattice_count: inverse must exist");
    BigInt k0 = (vp * inv) % Mp;
    if (k0 < 0) k0 += Mp;
    BigInt hi, lo;
    mpz_fdiv_q(hi.get_mpz_t(), BigInt(k2 - k0).get_mpz_t(), Mp.get_mpz_t());
    mpz_fdiv_q(lo.get_mpz_t(), BigInt(k1 - 1 - k0).get_mpz_t(), Mp.get_mpz_t());
    return hi - lo;
}

// Full columns [na, nb] covered by one affine piece y = cc + ss x, no
// vertical clipping. Telescopes the per-column floors; ascending pieces lose
// a row wherever a column's right-edge value lands exactly on a row line.
BigInt affine_unclipped(const Ctx& c, const BigRat& cc, const BigRat& ss, const BigInt& na,
                        const BigInt& nb) {
    BigInt N = nb - na + 1;
    if (sgn(ss) == 0) {
        return N;  // caller handles band membership; unclipped flat: one row per column
    }
    BigRat yA = cc + ss * (BigRat(na) * c.r);
    BigRat yB = cc + ss * (BigRat(nb + 1) * c.r);
    BigInt FA = floor_quotient(yA, c.r);
    BigInt FB = floor_quotient(yB, c.r);
    if (sgn(ss) > 0) {
        BigInt L = lattice_count(cc / c.r, ss, na + 1, nb + 1);
        return FB - FA + N - L;
    }
    return FA - FB + N;
}

BigInt affine_run(const Ctx& c, const BigRat& cc, const BigRat& ss, const BigInt& na,
                  const BigInt& nb);

// Segment of an affine run strictly between crossing buffers: it is entirely
// inside or entirely outside the vertical band. The one-column buffers around
// each crossing guarantee strict separation, asserted here.
BigInt affine_segment_clipped(const Ctx& c, const BigRat& cc, const BigRat& ss,
                              const BigInt& na, const BigInt& nb) {
    const VClip& v = *c.vc;
    BigRat yl = cc + ss * (BigRat(na) * c.r);
    BigRat yr = cc + ss * (BigRat(nb + 1) * c.r);
    bool asc = sgn(ss) > 0;
    BigRat ylo = asc ? yl : yr, yhi = asc ? yr : yl;
    bool lo_att = asc, hi_att = !asc;  // the left-edge value is the attained one
    if (yhi < v.lo) return 0;
    if (yhi == v.lo) {
        if (hi_att) throw InternalError("affine segment touches band bottom");
        return 0;
    }
    if (ylo > v.hi) return 0;
    if (ylo == v.hi) {
        if (lo_att) throw InternalError("affine segment touches band top");
        return 0;
    }
    if (ylo >= v.lo && yhi <= v.hi) return affine_unclipped(c, cc, ss, na, nb);
    throw InternalError("affine segment straddles the band");
}

// Full columns [na, nb] of one affine piece, honouring the vertical clip by
// isolating the band-crossing columns (plus one-column buffers).
BigInt affine_run(const Ctx& c, const BigRat& cc, const BigRat& ss, const BigInt& na,
                  const BigInt& nb) {
    if (na > nb) return 0;
    if (!c.vc) {
        if (sgn(ss) == 0) return nb - na + 1;
        return affine_unclipped(c, cc, ss, na, nb);
    }
    if (sgn(ss) == 0) {
        SpanInfo s{cc, cc, true, true};
        return cells_of(c, s) * BigInt(nb - na + 1);
    }
    std::set<BigInt> crossers;
    for (const BigRat& bound : {c.vc->lo, c.vc->hi}) {
        BigRat x_cross = (bound - cc) / ss;
        BigInt nc = floor_quotient(x_cross, c.r);
        for (int d = -1; d <= 1; ++d) {
            BigInt n = nc + d;
            if (n >= na && n <= nb) crossers.insert(n);
        }
    }
    BigInt total = 0;
    BigInt cursor = na;
    for (const BigInt& n : crossers) {
        if (cursor <= n - 1) total += affine_segment_clipped(c, cc, ss, cursor, n - 1);
        total += column_count(c, n);
        cursor = n + 1;
    }
    if (cursor <= nb) total += affine_segment_clipped(c, cc, ss, cursor, nb);
    return total;
}

// Affine parameters (intercept, slope) of tooth j.
std::pair<BigRat, BigRat> tooth_line(const SawtoothBlock& S, const BigInt& j) {
    bool desc = mpz_even_p(j.get_mpz_t());
    BigRat x_j = S.x0 + BigRat(j) * S.width;
    BigRat A = desc ? S.y_top : S.y_bottom;
    BigRat slope = (S.y_top - S.y_bottom) / S.width;
    if (desc) slope = -slope;
    return {A - slope * x_j, slope};
}

// Tooth unit j for teeth at least one column wide (w = p r): the seam column
// containing the tooth's left boundary (absent when boundaries sit on the
// column lattice) plus the interior columns, clamped to [lo, hi].
BigInt tooth_unit_count(const Ctx& c, const SawtoothBlock& S, const BigInt& j, const BigInt& p,
                        bool aligned, const BigInt& c0, const BigInt& lo, const BigInt& hi) {
    BigInt cj = c0 + j * p;
    BigInt total = 0;
    BigInt interior_lo = aligned ? cj : cj + 1;
    if (!aligned && cj >= lo && cj <= hi) total += column_count(c, cj);
    BigInt a = std::max(interior_lo, lo);
    BigInt b = std::min(BigInt(cj + p - 1), hi);
    if (a <= b) {
        auto [cc, ss] = tooth_line(S, j);
        total += affine_run(c, cc, ss, a, b);
    }
    return total;
}

BigInt sawtooth_run(const Ctx& c, const SawtoothBlock& S, const BigInt& ga, const BigInt& gb) {
    if (ga > gb) return 0;
    BigInt N = gb - ga + 1;
    if (is_multiple(c.r, S.width) && c.r != S.width) {
        // Columns at least two teeth wide: every column attains both levels.
        SpanInfo s{S.y_bottom, S.y_top, true, true};
        return cells_of(c, s) * N;
    }
    if (is_multiple(S.width, c.r)) {
        BigRat ratio = S.width / c.r;
        BigInt p = ratio.get_num();
        bool aligned = is_multiple(S.x0, c.r);
        BigInt c0 = floor_quotient(S.x0, c.r);  // c_j = c0 + j p
        auto j_of_col = [&](const BigInt& n) {
            BigInt j = floor_quotient(BigRat(n) * c.r - S.x0, S.width);
            if (j < 0) j = 0;
            if (j > S.teeth - 1) j = S.teeth - 1;
            return j;
        };
        BigInt ja = j_of_col(ga), jb = j_of_col(gb);
        BigInt teeth_in_range = jb - ja + 1;
        if (teeth_in_range <= c.limits.uniform_teeth_threshold) {
            BigInt total = 0;
            for (BigInt j = ja; j <= jb; j += 1)
                total += tooth_unit_count(c, S, j, p, aligned, c0, ga, gb);
            // Seam of the tooth after jb may still fall inside the range.
            if (!aligned) {
                BigInt c_next = c0 + (jb + 1) * p;
                if (c_next >= ga && c_next <= gb) total += column_count(c, c_next);
            }
            return total;
        }
        // Uniform middle: same-parity teeth are translates by 2w = 2p r with
        // identical absolute levels, so their counts coincide.
        BigInt total = tooth_unit_count(c, S, ja, p, aligned, c0, ga, gb) +
                       tooth_unit_count(c, S, jb, p, aligned, c0, ga, gb);
        if (!aligned) {
            BigInt c_next = c0 + (jb + 1) * p;
            if (c_next >= ga && c_next <= gb) total += column_count(c, c_next);
        }
        BigInt full_lo = ja + 1, full_hi = jb - 1;
        if (full_lo <= full_hi) {
            BigInt n_total = full_hi - full_lo + 1;
            BigInt first_even = full_lo;
            if (mpz_odd_p(first_even.get_mpz_t())) first_even += 1;
            BigInt n_even = 0;
            if (first_even <= full_hi) n_even = (full_hi - first_even) / 2 + 1;
            BigInt n_odd = n_total - n_even;
            if (n_even > 0) {
                BigInt T = tooth_unit_count(c, S, first_even, p, aligned, c0, ga, gb);
                total += T * n_even;
            }
            BigInt first_odd = full_lo;
            if (mpz_even_p(first_odd.get_mpz_t())) first_odd += 1;
            if (n_odd > 0) {
                BigInt T = tooth_unit_count(c, S, first_odd, p, aligned, c0, ga, gb);
                total += T * n_odd;
            }
        }
        return total;
    }
    // Incommensurate tooth width and scale: exact fallbacks.
    if (N <= c.limits.analytic_max_columns) {
        BigInt total = 0;
        for (BigInt n = ga; n <= gb; n += 1) total += column_count(c, n);
        return total;
    }
    if (S.width > c.r) {
        BigInt ja = floor_quotient(BigRat(ga) * c.r - S.x0, S.width);
        BigInt jb = floor_quotient(BigRat(gb) * c.r - S.x0, S.width);
        if (ja < 0) ja = 0;
        if (jb > S.teeth - 1) jb = S.teeth - 1;
        if (jb - ja + 1 <= c.limits.analytic_max_teeth) {
            // Seam columns contain tooth boundaries strictly inside them;
            // boundaries on the lattice need no seam. Interiors are the
            // columns fully inside one tooth.
            BigInt total = 0;
            std::set<BigInt> seams;
            for (BigInt j = ja; j <= jb + 1; j += 1) {
                BigRat x_j = S.x0 + BigRat(j) * S.width;
                if (is_multiple(x_j, c.r)) continue;
                BigInt cj = floor_quotient(x_j, c.r);
                if (cj >= ga && cj <= gb) seams.insert(cj);
            }
            for (const BigInt& n : seams) total += column_count(c, n);
            for (BigInt j = ja; j <= jb; j += 1) {
                BigRat x_j = S.x0 + BigRat(j) * S.width;
                BigRat x_j1 = x_j + S.width;
                BigInt a = std::max(ga, ceil_quotient(x_j, c.r));
                BigInt b = std::min(gb, BigInt(floor_quotient(x_j1, c.r) - 1));
                if (a <= b) {
                    auto [cc, ss] = tooth_line(S, j);
                    total += affine_run(c, cc, ss, a, b);
                }
            }
            return total;
        }
    }
    throw FeasibilityError("analytic mesh count infeasible: incommensurate sawtooth too large");
}

BigInt explicit_run(const Ctx& c, const ExplicitBlock& E, const BigInt& ga, const BigInt& gb) {
    BigInt total = 0;
    BigInt covered = 0;
    for (size_t i = 0; i + 1 < E.pts.size(); ++i) {
        const BigRat& px0 = E.pts[i].first;
        const BigRat& px1 = E.pts[i + 1].first;
        BigInt na = std::max(ga, ceil_quotient(px0, c.r));
        BigInt nb = std::min(gb, BigInt(floor_quotient(px1, c.r) - 1));
        if (na > nb) continue;
        BigRat ss = (E.pts[i + 1].second - E.pts[i].second) / (px1 - px0);
        BigRat cc = E.pts[i].second - ss * px0;
        total += affine_run(c, cc, ss, na, nb);
        covered += nb - na + 1;
    }
    if (covered != gb - ga + 1)
        throw InternalError("explicit run: pieces did not tile the gap");
    return total;
}

BigInt analytic_count(const Ctx& c) {
    BigInt n0 = floor_quotient(c.X0, c.r);
    BigInt n1;
    if (c.X1 == c.fold_x && is_multiple(c.X1, c.r))
        n1 = floor_quotient(c.X1, c.r) - 1;
    else
        n1 = floor_quotient(c.X1, c.r);
    if (n1 < n0) n1 = n0;

    if (n1 - n0 <= 64) {
        BigInt total = 0;
        for (BigInt n = n0; n <= n1; n += 1) total += column_count(c, n);
        return total;
    }

    std::set<BigInt> specials{n0, n1};
    const auto& blocks = c.f.blocks();
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) {
            BigRat xb = block_x0(blocks[i]);
            if (xb > c.X0 && xb < c.X1) {
                BigInt n = floor_quotient(xb, c.r);
                if (n >= n0 && n <= n1) specials.insert(n);
            }
        }
        if (const auto* e = std::get_if<ExplicitBlock>(&blocks[i])) {
            for (size_t k = 1; k + 1 < e->pts.size(); ++k) {
                const BigRat& px = e->pts[k].first;
                if (px > c.X0 && px < c.X1) {
                    BigInt n = floor_quotient(px, c.r);
                    if (n >= n0 && n <= n1) specials.insert(n);
                }
            }
        }
    }

    BigInt total = 0;
    for (const BigInt& n : specials) total += column_count(c, n);

    BigInt prev;
    bool first = true;
    for (const BigInt& n : specials) {
        if (!first) {
            BigInt ga = prev + 1, gb = n - 1;
            if (ga <= gb) {
                BigRat xa = BigRat(ga) * c.r;
                size_t bi = c.f.block_index(xa);
                const Block& blk = blocks[bi];
                if (block_x1(blk) < BigRat(gb + 1) * c.r)
                    throw InternalError("run escapes its block");
                total += std::visit(
                    [&](const auto& bb) -> BigInt {
                        using T = std::decay_t<decltype(bb)>;
                        if constexpr (std::is_same_v<T, ConstantBlock>) {
                            SpanInfo s{bb.y, bb.y, true, true};
                            return cells_of(c, s) * BigInt(gb - ga + 1);
                        } else if constexpr (std::is_same_v<T, ExplicitBlock>) {
                            return explicit_run(c, bb, ga, gb);
                        } else {
                            return sawtooth_run(c, bb, ga, gb);
                        }
                    },
                    blk);
            }
        }
        prev = n;
        first = false;
    }
    return total;
}

BigInt brute_count(const Ctx& c) {
    BigInt n0 = floor_quotient(c.X0, c.r);
    BigInt n1;
    if (c.X1 == c.fold_x && is_multiple(c.X1, c.r))
        n1 = floor_quotient(c.X1, c.r) - 1;
    else
        n1 = floor_quotient(c.X1, c.r);
    if (n1 < n0) n1 = n0;
    if (n1 - n0 + 1 > c.limits.brute_max_columns)
        throw FeasibilityError("brute mesh count exceeds column budget");
    BigInt total = 0;
    for (BigInt n = n0; n <= n1; n += 1) total += column_count(c, n);
    return total;
}

}  // namespace

CountRecord mesh_count(const LazyPLF& f, const Window& w, const BigRat& r, CountMethod method,
                       MeshAnchor anchor, const CountLimits& limits) {
    if (sgn(r) <= 0) throw ValidationError("mesh_count: r must be positive");
    BigRat X0(0), X1(1);
    std::optional<VClip> vc;
    if (!w.whole) {
        X0 = std::max(BigRat(0), BigRat(w.x - w.half));
        X1 = std::min(BigRat(1), BigRat(w.x + w.half));
        if (X0 > X1) throw ValidationError("mesh_count: window misses the domain");
        vc = VClip{w.y - w.half, w.y + w.half};
    }

    CountRecord rec;
    rec.window = w;
    rec.r = r;
    rec.method = method;
    rec.anchor = anchor;

    if (anchor == MeshAnchor::window) {
        BigRat dx = -X0;
        BigRat dy = vc ? -vc->lo : BigRat(0);
        LazyPLF g = f.shifted(dx, dy);
        Ctx c{g, r, BigRat(0), X1 - X0, BigRat(1) - X0,
              vc ? std::optional<VClip>(VClip{BigRat(0), vc->hi - vc->lo}) : std::nullopt,
              limits};
        rec.count = (method == CountMethod::brute) ? brute_count(c) : analytic_count(c);
        return rec;
    }

    Ctx c{f, r, X0, X1, BigRat(1), vc, limits};
    rec.count = (method == CountMethod::brute) ? brute_count(c) : analytic_count(c);
    return rec;
}

}  // namespace omegadim
