#include "omegadim/plf.hpp"

#include <algorithm>

namespace omegadim {

namespace {

struct Candidate {
    BigRat value;
    bool attained;
};

// Level of the sawtooth at tooth boundary j (phase: start at top).
BigRat tooth_level(const SawtoothBlock& s, const BigInt& j) {
    return mpz_even_p(j.get_mpz_t()) ? s.y_top : s.y_bottom;
}

BigRat sawtooth_eval(const SawtoothBlock& s, const BigRat& x) {
    BigRat off = x - s.x0;
    BigInt j = floor_quotient(off, s.width);
    if (j >= s.teeth) j = s.teeth - 1;  // x == x1 folds into the last tooth
    if (j < 0) j = 0;
    BigRat frac = (off - BigRat(j) * s.width) / s.width;
    BigRat a = tooth_level(s, j);
    BigRat b = tooth_level(s, j + 1);
    return a + (b - a) * frac;
}

BigRat explicit_eval(const ExplicitBlock& bb, const BigRat& x) {
    const auto& p = bb.pts;
    size_t lo = 0, hi = p.size() - 1;
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (p[mid].first <= x) lo = mid;
        else hi = mid;
    }
    const auto& [x0, y0] = p[lo];
    const auto& [x1, y1] = p[hi];
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Is there a tooth boundary of the requested parity in [jlo, jhi]?
bool parity_in_range(const BigInt& jlo, const BigInt& jhi, bool even) {
    if (jlo > jhi) return false;
    if ((mpz_even_p(jlo.get_mpz_t()) != 0) == even) return true;
    return jlo + 1 <= jhi;
}

}  // namespace

BigRat block_x0(const Block& b) {
    return std::visit(
        [](const auto& blk) -> BigRat {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, ExplicitBlock>) return blk.pts.front().first;
            else return blk.x0;
        },
        b);
}

BigRat block_x1(const Block& b) {
    return std::visit(
        [](const auto& blk) -> BigRat {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, ExplicitBlock>) return blk.pts.back().first;
            else return blk.x1;
        },
        b);
}

BigRat block_start_value(const Block& b) {
    return std::visit(
        [](const auto& blk) -> BigRat {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, ExplicitBlock>) return blk.pts.front().second;
            else if constexpr (std::is_same_v<T, SawtoothBlock>) return blk.y_top;
            else return blk.y;
        },
        b);
}

BigRat block_end_value(const Block& b) {
    return std::visit(
        [](const auto& blk) -> BigRat {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, ExplicitBlock>) return blk.pts.back().second;
            else if constexpr (std::is_same_v<T, SawtoothBlock>)
                return tooth_level(blk, blk.teeth);
            else return blk.y;
        },
        b);
}

LazyPLF::LazyPLF(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ValidationError("LazyPLF: no blocks");
    for (const auto& b : blocks_) {
        std::visit(
            [](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    if (blk.pts.size() < 2)
                        throw ValidationError("explicit block needs >= 2 breakpoints");
                    for (size_t i = 1; i < blk.pts.size(); ++i)
                        if (blk.pts[i].first <= blk.pts[i - 1].first)
                            throw ValidationError("explicit breakpoints must increase in x");
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    if (blk.teeth < 1 || mpz_even_p(blk.teeth.get_mpz_t()))
                        throw ValidationError("sawtooth teeth count must be odd and >= 1");
                    if (sgn(blk.width) <= 0)
                        throw ValidationError("sawtooth width must be positive");
                    if (blk.y_top <= blk.y_bottom)
                        throw ValidationError("sawtooth needs y_top > y_bottom");
                    if (blk.x1 - blk.x0 != BigRat(blk.teeth) * blk.width)
                        throw ValidationError("sawtooth extent must equal teeth * width");
                } else {
                    if (blk.x1 <= blk.x0)
                        throw ValidationError("constant block needs x1 > x0");
                }
            },
            b);
    }
    if (block_x0(blocks_.front()) != 0)
        throw ValidationError("blocks must start at x = 0");
    if (block_x1(blocks_.back()) != 1)
        throw ValidationError("blocks must end at x = 1");
    for (size_t i = 1; i < blocks_.size(); ++i) {
        if (block_x0(blocks_[i]) != block_x1(blocks_[i - 1]))
            throw ValidationError("blocks must tile [0,1] without gaps or overlap");
        if (block_start_value(blocks_[i]) != block_end_value(blocks_[i - 1]))
            throw ValidationError("blocks must agree at shared endpoints");
    }
}

LazyPLF LazyPLF::constant(const BigRat& y) {
    return LazyPLF({ConstantBlock{BigRat(0), BigRat(1), y}});
}

LazyPLF LazyPLF::from_points(std::vector<std::pair<BigRat, BigRat>> pts) {
    return LazyPLF({ExplicitBlock{std::move(pts)}});
}

size_t LazyPLF::block_index(const BigRat& x) const {
    // Coverage is [0,1] for validated functions; shifted copies translate it.
    if (x < block_x0(blocks_.front()) || x > block_x1(blocks_.back()))
        throw ValidationError("LazyPLF: x outside function domain");
    size_t lo = 0, hi = blocks_.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (block_x0(blocks_[mid]) <= x) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

BigRat LazyPLF::eval(const BigRat& x) const {
    const Block& b = blocks_[block_index(x)];
    return std::visit(
        [&](const auto& blk) -> BigRat {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, ConstantBlock>) return blk.y;
            else if constexpr (std::is_same_v<T, SawtoothBlock>) return sawtooth_eval(blk, x);
            else return explicit_eval(blk, x);
        },
        b);
}

SpanInfo LazyPLF::span_over(const BigRat& a, const BigRat& b, bool right_closed) const {
    if (a < block_x0(blocks_.front()) || b > block_x1(blocks_.back()) || a > b ||
        (a == b && !right_closed))
        throw ValidationError("span_over: empty or out-of-domain interval");
    std::vector<Candidate> cs;
    cs.reserve(8);
    for (size_t i = block_index(a); i < blocks_.size(); ++i) {
        const Block& blk = blocks_[i];
        BigRat bx0 = block_x0(blk), bx1 = block_x1(blk);
        if (bx0 > b || (bx0 == b && !right_closed)) break;
        BigRat s = std::max(a, bx0);
        BigRat e = std::min(b, bx1);
        if (s > e) continue;
        bool e_att = (e < b) || right_closed;
        if (s == e && !e_att) continue;
        std::visit(
            [&](const auto& bb) {
                using T = std::decay_t<decltype(bb)>;
                if constexpr (std::is_same_v<T, ConstantBlock>) {
                    cs.push_back({bb.y, true});
                } else if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    cs.push_back({explicit_eval(bb, s), true});
                    cs.push_back({explicit_eval(bb, e), e_att});
                    for (const auto& [px, py] : bb.pts)
                        if (px > s && px < e) cs.push_back({py, true});
                } else {
                    cs.push_back({sawtooth_eval(bb, s), true});
                    cs.push_back({sawtooth_eval(bb, e), e_att});
                    // Vertices strictly inside (s, e); endpoint vertices are
                    // already covered by the two eval candidates.
                    BigInt jlo = floor_quotient(s - bb.x0, bb.width) + 1;
                    BigInt jhi = floor_quotient(e - bb.x0, bb.width);
                    if (bb.x0 + BigRat(jhi) * bb.width == e) jhi -= 1;
                    if (jlo < 1) jlo = 1;
                    if (jhi > bb.teeth - 1) jhi = bb.teeth - 1;
                    if (parity_in_range(jlo, jhi, /*even=*/true))
                        cs.push_back({bb.y_top, true});
                    if (parity_in_range(jlo, jhi, /*even=*/false))
                        cs.push_back({bb.y_bottom, true});
                }
            },
            blk);
        if (bx1 >= b) break;
    }
    if (cs.empty()) throw ValidationError("span_over: no attained values");
    SpanInfo out{cs[0].value, cs[0].value, cs[0].attained, cs[0].attained};
    for (size_t i = 1; i < cs.size(); ++i) {
        if (cs[i].value > out.hi) {
            out.hi = cs[i].value;
            out.hi_attained = cs[i].attained;
        } else if (cs[i].value == out.hi && cs[i].attained) {
            out.hi_attained = true;
        }
        if (cs[i].value < out.lo) {
            out.lo = cs[i].value;
            out.lo_attained = cs[i].attained;
        } else if (cs[i].value == out.lo && cs[i].attained) {
            out.lo_attained = true;
        }
    }
    return out;
}

std::pair<BigRat, BigRat> LazyPLF::column_span(const BigRat& x_lo, const BigRat& x_hi) const {
    if (x_lo >= x_hi) throw ValidationError("column_span: need x_lo < x_hi");
    SpanInfo s = span_over(x_lo, x_hi, /*right_closed=*/true);
    return {s.lo, s.hi};
}

LazyPLF LazyPLF::shifted(const BigRat& dx, const BigRat& dy) const {
    // Bypass the constructor: a shifted copy no longer tiles [0,1].
    LazyPLF out = *this;
    for (auto& b : out.blocks_) {
        std::visit(
            [&](auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    for (auto& [px, py] : blk.pts) {
                        px += dx;
                        py += dy;
                    }
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    blk.x0 += dx;
                    blk.x1 += dx;
                    blk.y_top += dy;
                    blk.y_bottom += dy;
                } else {
                    blk.x0 += dx;
                    blk.x1 += dx;
                    blk.y += dy;
                }
            },
            b);
    }
    return out;
}

std::pair<BigRat, BigRat> LazyPLF::range() const {
    BigRat lo = block_start_value(blocks_.front());
    BigRat hi = lo;
    for (const auto& b : blocks_) {
        std::visit(
            [&](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    for (const auto& [px, py] : blk.pts) {
                        lo = std::min(lo, py);
                        hi = std::max(hi, py);
                    }
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    lo = std::min(lo, blk.y_bottom);
                    hi = std::max(hi, blk.y_top);
                } else {
                    lo = std::min(lo, blk.y);
                    hi = std::max(hi, blk.y);
                }
            },
            b);
    }
    return {lo, hi};
}

BigRat LazyPLF::max_abs_slope() const {
    BigRat best(0);
    for (const auto& b : blocks_) {
        std::visit(
            [&](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                if constexpr (std::is_same_v<T, ExplicitBlock>) {
                    for (size_t i = 1; i < blk.pts.size(); ++i) {
                        BigRat s = (blk.pts[i].second - blk.pts[i - 1].second) /
                                   (blk.pts[i].first - blk.pts[i - 1].first);
                        best = std::max(best, BigRat(abs(s)));
                    }
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    best = std::max(best, BigRat((blk.y_top - blk.y_bottom) / blk.width));
                }
            },
            b);
    }
    return best;
}

BigInt cells_for_span(const BigRat& y_min, const BigRat& y_max, const BigRat& r) {
    if (y_min > y_max) throw ValidationError("cells_for_span: y_min > y_max");
    if (sgn(r) <= 0) throw ValidationError("cells_for_span: r must be positive");
    return floor_quotient(y_max, r) - floor_quotient(y_min, r) + 1;
}

}  // namespace omegadim
