#include "omegadim/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace omegadim {

namespace {

constexpr long double kEtaTol = 1e-9L;
constexpr long double kGrowthTol = 1e-12L;

long double log1p_abs(long double log_t) {
    // ln(1 + |ln t|) for t in (0,1]: log_t <= 0.
    return std::log(1.0L + (log_t < 0 ? -log_t : log_t));
}

}  // namespace

ModulusSpec ModulusSpec::holder(const BigRat& alpha) {
    ModulusSpec m;
    m.kind_ = ModulusKind::holder;
    m.alpha_ = alpha;
    m.validate();
    return m;
}

ModulusSpec ModulusSpec::lipschitz() {
    ModulusSpec m;
    m.kind_ = ModulusKind::lipschitz;
    m.alpha_ = BigRat(1);
    m.validate();
    return m;
}

ModulusSpec ModulusSpec::loglip() {
    ModulusSpec m;
    m.kind_ = ModulusKind::loglip;
    m.alpha_ = BigRat(1);
    m.beta_ = BigRat(1);
    m.validate();
    return m;
}

ModulusSpec ModulusSpec::power_log(const BigRat& alpha, const BigRat& beta) {
    ModulusSpec m;
    m.kind_ = ModulusKind::power_log;
    m.alpha_ = alpha;
    m.beta_ = beta;
    m.validate();
    return m;
}

ModulusSpec ModulusSpec::table(std::vector<std::pair<BigRat, BigRat>> points) {
    ModulusSpec m;
    m.kind_ = ModulusKind::table;
    m.points_ = std::move(points);
    m.validate();
    return m;
}

ModulusSpec ModulusSpec::parse(const std::string& text) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        return parts;
    };
    auto parts = split(text);
    if (parts.empty()) throw ValidationError("empty modulus string");
    const std::string& head = parts[0];
    if (head == "lipschitz") {
        if (parts.size() != 1) throw ValidationError("lipschitz takes no parameters");
        return lipschitz();
    }
    if (head == "loglip") {
        if (parts.size() != 1) throw ValidationError("loglip takes no parameters");
        return loglip();
    }
    if (head == "holder") {
        if (parts.size() != 2) throw ValidationError("usage: holder:<alpha>");
        return holder(parse_rat(parts[1]));
    }
    if (head == "powerlog") {
        if (parts.size() != 3) throw ValidationError("usage: powerlog:<alpha>:<beta>");
        return power_log(parse_rat(parts[1]), parse_rat(parts[2]));
    }
    if (head == "table") {
        if (parts.size() < 2) throw ValidationError("usage: table:<path>");
        // Paths may contain ':'; rejoin.
        std::string path = text.substr(std::string("table:").size());
        return table_from_csv(path);
    }
    throw ValidationError("unknown modulus kind: " + head);
}

ModulusSpec ModulusSpec::table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open table file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty table file: " + path);
    // Tolerate an optional "t,omega" header.
    auto parse_line = [](const std::string& l) -> std::optional<std::pair<BigRat, BigRat>> {
        auto comma = l.find(',');
        if (comma == std::string::npos) return std::nullopt;
        std::string a = l.substr(0, comma), b = l.substr(comma + 1);
        auto strip = [](std::string& s) {
            while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
            while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        };
        strip(a);
        strip(b);
        return std::make_pair(parse_rat(a), parse_rat(b));
    };
    std::vector<std::pair<BigRat, BigRat>> pts;
    bool first_is_header = false;
    try {
        auto p = parse_line(line);
        if (p) pts.push_back(*p);
        else first_is_header = true;
    } catch (const ValidationError&) {
        first_is_header = true;
    }
    (void)first_is_header;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto p = parse_line(line);
        if (!p) throw ValidationError("bad table row: " + line);
        pts.push_back(*p);
    }
    return table(std::move(pts));
}

void ModulusSpec::validate() {
    switch (kind_) {
        case ModulusKind::holder:
            if (alpha_ <= 0 || alpha_ >= 1)
                throw ValidationError("holder alpha must lie in (0,1)");
            concave_ = true;
            break;
        case ModulusKind::lipschitz:
        case ModulusKind::loglip:
            concave_ = true;
            break;
        case ModulusKind::power_log: {
            if (alpha_ <= 0) throw ValidationError("powerlog alpha must be positive");
            // Monotonicity on (0,1] requires beta <= alpha; otherwise omega
            // decreases near t=1 and is not a modulus.
            if (beta_ > alpha_)
                throw ValidationError("powerlog requires beta <= alpha for monotonicity");
            // Concavity is certified on a dyadic midpoint grid.
            concave_ = true;
            for (int j = 1; j < 40 && concave_; ++j) {
                long double ls = -0.41L * j, lt = -0.73L * j - 0.2L;
                long double s = std::exp(ls), t = std::exp(lt);
                long double mid = (s + t) / 2;
                long double wm = std::exp(eval_log(std::log(mid)));
                long double ws = std::exp(eval_log(ls)), wt = std::exp(eval_log(lt));
                if (wm < (ws + wt) / 2 - 1e-15L) concave_ = false;
            }
            break;
        }
        case ModulusKind::table: {
            if (points_.size() < 2) throw ValidationError("table needs at least 2 points");
            for (size_t i = 0; i < points_.size(); ++i) {
                if (points_[i].first <= 0)
                    throw ValidationError("table t values must be positive");
                if (points_[i].second <= 0)
                    throw ValidationError("table omega values must be positive");
                if (i > 0 && points_[i].first <= points_[i - 1].first)
                    throw ValidationError("table t values must be strictly increasing");
                if (i > 0 && points_[i].second < points_[i - 1].second)
                    throw ValidationError("table omega values must be non-decreasing");
            }
            // Exact concavity certificate: chord slopes non-increasing.
            concave_ = true;
            for (size_t i = 2; i < points_.size(); ++i) {
                BigRat s1 = (points_[i - 1].second - points_[i - 2].second) /
                            (points_[i - 1].first - points_[i - 2].first);
                BigRat s2 = (points_[i].second - points_[i - 1].second) /
                            (points_[i].first - points_[i - 1].first);
                if (s2 > s1) {
                    concave_ = false;
                    break;
                }
            }
            break;
        }
    }
}

std::string ModulusSpec::describe() const {
    switch (kind_) {
        case ModulusKind::holder: return "holder:" + format_rat(alpha_);
        case ModulusKind::lipschitz: return "lipschitz";
        case ModulusKind::loglip: return "loglip";
        case ModulusKind::power_log:
            return "powerlog:" + format_rat(alpha_) + ":" + format_rat(beta_);
        case ModulusKind::table:
            return "table[" + std::to_string(points_.size()) + " pts]";
    }
    return "?";
}

long double ModulusSpec::eval_log(long double log_t) const {
    if (log_t > 0)
        throw ValidationError("eval_log: log_t must be <= 0 (t <= 1)");
    switch (kind_) {
        case ModulusKind::holder:
            return (long double)rat_to_double(alpha_) * log_t;
        case ModulusKind::lipschitz:
            return log_t;
        case ModulusKind::loglip:
            return log_t + log1p_abs(log_t);
        case ModulusKind::power_log:
            return (long double)rat_to_double(alpha_) * log_t +
                   (long double)rat_to_double(beta_) * log1p_abs(log_t);
        case ModulusKind::table: {
            long double lmin = ln_rat(points_.front().first);
            long double lmax = ln_rat(points_.back().first);
            if (log_t < lmin)
                throw ValidationError("table modulus queried below tabulated range");
            if (log_t > lmax + 1e-15L)
                throw ValidationError("table modulus queried above tabulated range");
            long double t = std::exp(log_t);
            // Linear interpolation in linear space.
            size_t lo = 0, hi = points_.size() - 1;
            while (hi - lo > 1) {
                size_t mid = (lo + hi) / 2;
                if ((long double)rat_to_double(points_[mid].first) <= t) lo = mid;
                else hi = mid;
            }
            long double t0 = rat_to_double(points_[lo].first);
            long double t1 = rat_to_double(points_[hi].first);
            long double w0 = rat_to_double(points_[lo].second);
            long double w1 = rat_to_double(points_[hi].second);
            long double w = w0 + (w1 - w0) * (t - t0) / (t1 - t0);
            return std::log(w);
        }
    }
    return 0;
}

std::optional<BigRat> ModulusSpec::omega_exact(const BigRat& t) const {
    if (sgn(t) < 0) throw ValidationError("omega_exact: t must be >= 0");
    if (sgn(t) == 0) return BigRat(0);
    switch (kind_) {
        case ModulusKind::lipschitz:
            return t;
        case ModulusKind::holder: {
            unsigned long q = alpha_.get_den().get_ui();
            auto root = rat_root_exact(t, q);
            if (!root) return std::nullopt;
            return rat_pow(*root, alpha_.get_num().get_si());
        }
        case ModulusKind::power_log:
            if (beta_ == 0) {
                unsigned long q = alpha_.get_den().get_ui();
                auto root = rat_root_exact(t, q);
                if (!root) return std::nullopt;
                return rat_pow(*root, alpha_.get_num().get_si());
            }
            return std::nullopt;
        case ModulusKind::loglip:
            return std::nullopt;
        case ModulusKind::table: {
            if (t < points_.front().first || t > points_.back().first) return std::nullopt;
            size_t lo = 0, hi = points_.size() - 1;
            while (hi - lo > 1) {
                size_t mid = (lo + hi) / 2;
                if (points_[mid].first <= t) lo = mid;
                else hi = mid;
            }
            const auto& [t0, w0] = points_[lo];
            const auto& [t1, w1] = points_[hi];
            return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
        }
    }
    return std::nullopt;
}

double ModulusSpec::omega(double t) const {
    if (t <= 0) return 0.0;
    return std::exp((double)eval_log(std::log((long double)t)));
}

EtaReport eta_estimate(const ModulusSpec& m, long double log_t_min) {
    if (log_t_min >= 0) throw ValidationError("eta_estimate: log_t_min must be < 0");
    EtaReport rep;
    switch (m.kind()) {
        case ModulusKind::holder:
            rep.eta = rat_to_double(m.alpha());
            rep.exact = true;
            return rep;
        case ModulusKind::lipschitz:
            rep.eta = 1.0;
            rep.exact = true;
            return rep;
        case ModulusKind::table: {
            // Tail statistics over the last decade of tabulated points; the
            // liminf/limsup may differ for irregular data, so report both.
            const auto& pts = m.points();
            long double t_min = ln_rat(pts.front().first);
            long double floor_used = std::max(log_t_min, t_min);
            rep.eta = (double)(m.eval_log(floor_used) / floor_used);
            long double lo = 1e30L, hi = -1e30L;
            BigRat decade_cut = pts.front().first * 10;
            for (const auto& [t, w] : pts) {
                if (t > decade_cut || t >= 1) continue;
                long double ratio = ln_rat(w) / ln_rat(t);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            if (lo <= hi) {
                rep.tail_low = (double)lo;
                rep.tail_high = (double)hi;
            }
            return rep;
        }
        default:
            rep.eta = (double)(m.eval_log(log_t_min) / log_t_min);
            return rep;
    }
}

Regime classify_regime(const ModulusSpec& m, long double probe_depth) {
    if (probe_depth >= 0) throw ValidationError("classify_regime: probe_depth must be < 0");
    long double floor_used = probe_depth;
    if (m.kind() == ModulusKind::table) {
        long double lmin = ln_rat(m.points().front().first);
        floor_used = std::max(probe_depth, lmin + 1e-12L);
    }
    EtaReport eta = eta_estimate(m, floor_used);
    if ((long double)eta.eta > 1.0L + kEtaTol) return Regime::constant_only;
    // log of omega(t)/t at the floor and one step above it; the ratio is
    // non-increasing in t for concave omega, so the floor value decides
    // boundedness up to the probe's resolution.
    static const long double kLn2 = 0.693147180559945309417L;
    long double step = std::min(kLn2, -floor_used / 2);
    if (m.kind() == ModulusKind::table) {
        long double lmax = ln_rat(m.points().back().first);
        step = std::min(step, lmax - floor_used);
    }
    if (step <= 0) throw ValidationError("classify_regime: probe too shallow");
    long double g_floor = m.eval_log(floor_used) - floor_used;
    long double g_above = m.eval_log(floor_used + step) - (floor_used + step);
    bool growing = g_floor > g_above + kGrowthTol;
    if (!growing) return Regime::lipschitz_regime;
    if ((long double)eta.eta < 1.0L - kEtaTol) return Regime::fractal_regime;
    return Regime::undetermined;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::constant_only: return "constant_only";
        case Regime::lipschitz_regime: return "lipschitz_regime";
        case Regime::fractal_regime: return "fractal_regime";
        case Regime::undetermined: return "undetermined";
    }
    return "?";
}

double theoretical_spectrum(double eta, double theta) {
    if (eta <= 0) throw ValidationError("theoretical_spectrum: eta must be positive");
    if (theta <= 0 || theta >= 1)
        throw ValidationError("theoretical_spectrum: theta must lie in (0,1)");
    if (eta >= 1) return 1.0;
    if (theta > eta) return 2.0;
    return 2.0 - (eta - theta) / (1.0 - theta);
}

double spectrum_upper_bound(double eta, double theta) {
    if (!(0 < theta && theta < eta && eta <= 1))
        throw ValidationError("spectrum_upper_bound: need 0 < theta < eta <= 1");
    return 2.0 - (eta - theta) / (1.0 - theta);
}

double naive_spectrum_bound(double eta, double theta) {
    if (!(0 < theta && theta < 1))
        throw ValidationError("naive_spectrum_bound: theta in (0,1)");
    return (2.0 - eta) / (1.0 - theta);
}

}  // namespace omegadim
