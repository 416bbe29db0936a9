#pragma once

#include <variant>
#include <vector>

#include "omegadim/rational.hpp"

namespace omegadim {

// Affine interpolation between consecutive breakpoints. Covers
// [pts.front().x, pts.back().x].
struct ExplicitBlock {
    std::vector<std::pair<BigRat, BigRat>> pts;
};

// Zigzag alternating between y_top and y_bottom at consecutive multiples of
// `width` from x0, starting at y_top. `teeth` is odd, so the block ends at
// y_bottom. x1 - x0 == teeth * width exactly; teeth is never enumerated.
struct SawtoothBlock {
    BigRat x0, x1;
    BigRat width;
    BigInt teeth;
    BigRat y_top, y_bottom;
};

struct ConstantBlock {
    BigRat x0, x1;
    BigRat y;
};

using Block = std::variant<ExplicitBlock, SawtoothBlock, ConstantBlock>;

BigRat block_x0(const Block& b);
BigRat block_x1(const Block& b);
BigRat block_start_value(const Block& b);
BigRat block_end_value(const Block& b);

// Value range of f over an x-interval, with attainment flags for both
// extremes. The hi flag decides whether the top mesh row is met when hi sits
// exactly on a row line; the lo flag only matters under vertical clipping.
struct SpanInfo {
    BigRat lo, hi;
    bool lo_attained = true;
    bool hi_attained = true;
};

// Exactly-evaluable piecewise-linear function whose blocks tile [0,1].
class LazyPLF {
  public:
    explicit LazyPLF(std::vector<Block> blocks);

    static LazyPLF constant(const BigRat& y);
    static LazyPLF from_points(std::vector<std::pair<BigRat, BigRat>> pts);

    const std::vector<Block>& blocks() const { return blocks_; }

    // Exact value; x in [0,1]. Sawtooth teeth are indexed by integer
    // division, never enumerated.
    BigRat eval(const BigRat& x) const;

    // Exact min/max over the closed interval [x_lo, x_hi] in [0,1].
    std::pair<BigRat, BigRat> column_span(const BigRat& x_lo, const BigRat& x_hi) const;

    // Span over [a,b) (or [a,b] when right_closed), for mesh counting.
    SpanInfo span_over(const BigRat& a, const BigRat& b, bool right_closed) const;

    // Index of the block containing x (ties resolved to the later block,
    // except x == 1 which lands in the last).
    size_t block_index(const BigRat& x) const;

    // The same function translated by (dx, dy).
    LazyPLF shifted(const BigRat& dx, const BigRat& dy) const;

    // Exact extrema over [0,1].
    std::pair<BigRat, BigRat> range() const;

    // Maximum absolute slope over all affine pieces (Lipschitz seminorm).
    BigRat max_abs_slope() const;

  private:
    std::vector<Block> blocks_;
};

// Number of half-open mesh rows [m r, (m+1) r) meeting the closed vertical
// segment [y_min, y_max]: floor(y_max/r) - floor(y_min/r) + 1.
BigInt cells_for_span(const BigRat& y_min, const BigRat& y_max, const BigRat& r);

}  // namespace omegadim
