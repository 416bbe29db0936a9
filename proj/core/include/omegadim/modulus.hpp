#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omegadim/rational.hpp"

namespace omegadim {

enum class ModulusKind { holder, lipschitz, loglip, power_log, table };

enum class Regime { constant_only, lipschitz_regime, fractal_regime, undetermined };

// A modulus of continuity: increasing, positive on (0,1], omega(0+)=0.
// Built-in kinds evaluate in log-space so scales like 2^-150000 stay exact
// enough for certificates; the table kind interpolates user data linearly.
class ModulusSpec {
  public:
    static ModulusSpec holder(const BigRat& alpha);
    static ModulusSpec lipschitz();
    static ModulusSpec loglip();
    static ModulusSpec power_log(const BigRat& alpha, const BigRat& beta);
    static ModulusSpec table(std::vector<std::pair<BigRat, BigRat>> points);

    // Mini-language: "holder:0.5", "lipschitz", "loglip", "powerlog:0.5:0.5",
    // "table:<csv path>" (header "t,omega", strictly increasing t).
    static ModulusSpec parse(const std::string& text);
    static ModulusSpec table_from_csv(const std::string& path);

    ModulusKind kind() const { return kind_; }
    const BigRat& alpha() const { return alpha_; }
    const BigRat& beta() const { return beta_; }
    const std::vector<std::pair<BigRat, BigRat>>& points() const { return points_; }
    std::string describe() const;

    // True when concavity is certified: analytic for holder/lipschitz/loglip,
    // exact chord-slope test for table, dense midpoint grid for power_log.
    bool concave_certified() const { return concave_; }

    // log omega(e^log_t), natural logs. Requires log_t <= 0; the table kind
    // rejects queries below its tabulated range.
    long double eval_log(long double log_t) const;

    // Exact omega(t) when representable (lipschitz; holder at perfect powers;
    // table inside its range).
    std::optional<BigRat> omega_exact(const BigRat& t) const;

    // omega(t) as a double through the log-space path.
    double omega(double t) const;

  private:
    ModulusSpec() = default;
    void validate();

    ModulusKind kind_ = ModulusKind::lipschitz;
    BigRat alpha_{0};
    BigRat beta_{0};
    std::vector<std::pair<BigRat, BigRat>> points_;
    bool concave_ = false;
};

struct EtaReport {
    double eta = 0.0;
    bool exact = false;
    // Table kind only: min/max of log omega / log t over the tabulated tail,
    // reported instead of guessing which of liminf/limsup the user means.
    std::optional<double> tail_low;
    std::optional<double> tail_high;
};

// Scaling exponent log omega(t) / log t evaluated at t = e^{log_t_min};
// exact for holder (alpha) and lipschitz (1) regardless of depth.
EtaReport eta_estimate(const ModulusSpec& m, long double log_t_min);

// Regime of the induced function space, probed down to e^{probe_depth}.
Regime classify_regime(const ModulusSpec& m, long double probe_depth);

const char* regime_name(Regime r);

// Closed-form spectrum value for the extremal graphs: eta >= 1 -> 1;
// theta <= eta < 1 -> 2-(eta-theta)/(1-theta); theta > eta -> 2.
double theoretical_spectrum(double eta, double theta);

// Upper bound 2-(eta-theta)/(1-theta), valid for 0 < theta < eta <= 1.
double spectrum_upper_bound(double eta, double theta);

// The weaker comparison bound (2-eta)/(1-theta).
double naive_spectrum_bound(double eta, double theta);

}  // namespace omegadim
