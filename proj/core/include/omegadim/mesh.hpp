#pragma once

#include <optional>

#include "omegadim/plf.hpp"

namespace omegadim {

// Closed axis-aligned square around a graph point, or the whole domain.
// `half` is half the side length, so Q(x, R) of side R has half = R/2.
// The x-range is clipped to [0,1]; the y-range clips counted cells.
struct Window {
    bool whole = false;
    BigRat x{0}, y{0};
    BigRat half{0};

    static Window whole_domain() {
        Window w;
        w.whole = true;
        return w;
    }
    static Window square(const BigRat& center_x, const BigRat& center_y, const BigRat& side) {
        if (sgn(side) <= 0) throw ValidationError("window side must be positive");
        Window w;
        w.x = center_x;
        w.y = center_y;
        w.half = side / 2;
        return w;
    }
};

enum class CountMethod { analytic, brute };
enum class MeshAnchor { origin, window };

struct CountLimits {
    // Brute force enumerates every column.
    long brute_max_columns = 10'000'000;
    // Analytic fallbacks when no closed form applies.
    long analytic_max_columns = 1 << 21;
    long analytic_max_teeth = 1 << 21;
    // Per-tooth loops switch to per-parity representatives above this.
    long uniform_teeth_threshold = 4096;
};

struct CountRecord {
    Window window;
    BigRat r;
    BigInt count;
    CountMethod method = CountMethod::analytic;
    MeshAnchor anchor = MeshAnchor::origin;
};

// Counts mesh cells [n r,(n+1)r) x [m r,(m+1)r) met by the graph of f inside
// the window. A cell is counted iff some x with (x, f(x)) in the window lands
// in it; x = 1 folds into the last in-domain column. The analytic method
// compresses uniform column runs to closed forms; brute enumerates columns.
CountRecord mesh_count(const LazyPLF& f, const Window& w, const BigRat& r,
                       CountMethod method = CountMethod::analytic,
                       MeshAnchor anchor = MeshAnchor::origin,
                       const CountLimits& limits = {});

}  // namespace omegadim
