#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lwreg {

enum class Smoothness { kSmooth, kPiecewise };

/// Density chi on the real line with compact support in [lo, hi].
///
/// The cumulative integral is tabulated once (1024 Gauss-Legendre panels)
/// and completed on the fly with an 8-point rule inside the panel, so
/// cdf(s) is a smooth function of s to rounding; finite differences of H
/// therefore see no table noise.
class Mollifier {
public:
    using Density = std::function<double(double)>;

    /// exp(-1/(1-u^2)), u = 2s - 3, normalized to unit mass on [1, 2].
    static Mollifier bump();
    /// Indicator of the open interval (1, 2); piecewise.
    static Mollifier boxcar();
    /// Arbitrary density. `derivative` may be empty for piecewise densities.
    static Mollifier custom(std::string label, Density density, Density derivative, double lo,
                            double hi, Smoothness smoothness);

    double operator()(double s) const;
    /// chi'(s). Throws SmoothnessRequired for piecewise densities.
    double derivative(double s) const;
    /// Batched chi(s[i]); vectorized for the bump.
    void density(std::span<const double> s, std::span<double> out) const;
    void density_derivative(std::span<const double> s, std::span<double> out) const;

    /// int_{-inf}^{s} chi.
    double cdf(double s) const;
    /// int chi over the declared support (table total).
    double mass() const;

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    Smoothness smoothness() const { return smoothness_; }
    bool smooth() const { return smoothness_ == Smoothness::kSmooth; }
    const std::string& label() const { return label_; }

private:
    enum class Kind { kBump, kBoxcar, kCustom };
    Mollifier(Kind kind, std::string label, Density density, Density derivative, double lo,
              double hi, Smoothness smoothness, double norm);
    void build_table();

    Kind kind_;
    std::string label_;
    Density density_;
    Density derivative_;
    double lo_;
    double hi_;
    Smoothness smoothness_;
    double norm_ = 1.0; // bump normalization
    std::shared_ptr<const std::vector<double>> table_; // cdf at panel edges
};

/// H_eps(r) = int_0^{r/eps} chi, with H' = chi(r/eps)/eps and
/// H'' = chi'(r/eps)/eps^2 taken from the density, not differenced.
class HeavisideFamily {
public:
    /// Skips the mass/support validation of make_family. Only for probing
    /// how the property checks react to a defective density.
    static HeavisideFamily unchecked(Mollifier chi);

    double H(double r, double eps) const;
    double dH(double r, double eps) const;
    /// Throws SmoothnessRequired for piecewise families.
    double d2H(double r, double eps) const;

    const Mollifier& mollifier() const { return chi_; }
    bool smooth() const { return chi_.smooth(); }

private:
    friend HeavisideFamily make_family(const Mollifier& chi);
    explicit HeavisideFamily(Mollifier chi) : chi_(std::move(chi)) {}
    Mollifier chi_;
};

/// Validates chi >= 0, int chi = 1 (to 1e-10) and supp chi within [1, 2].
/// Throws InvalidMollifier.
HeavisideFamily make_family(const Mollifier& chi);

/// Mollifier by config name: "bump" or "boxcar".
Mollifier mollifier_by_name(const std::string& name);

struct FamilyReport {
    bool nonnegative = true;          // (i)  H >= 0, H' >= 0
    bool vanishes_below = true;       // (ii) H(r) = 0 for r <= eps
    bool one_above = true;            // (iii) H(r) = 1 for r >= 2 eps
    bool bounded_derivative = true;   // (iv) sup eps H' bounded in eps
    double sup_eps_dH = 0.0;
    double sup_r = 0.0;               // where the supremum was attained
    double sup_eps = 0.0;
    double bound_slope = 0.0;         // log-log slope of sup eps H' against eps
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Numerical check of (i)-(iv) on the given grids. `r_grid` holds absolute
/// radii; each eps is additionally probed at r = s eps for a fixed set of s
/// in [0, 3] so the transition shell is always sampled.
FamilyReport family_check(const HeavisideFamily& H, std::span<const double> eps_grid,
                          std::span<const double> r_grid, double tol = 1e-10);

/// Strictly decreasing regularization parameters in (0, 1].
class EpsilonGrid {
public:
    explicit EpsilonGrid(std::vector<double> values);
    /// start * ratio^k, k = 0..count-1.
    static EpsilonGrid geometric(double start, double ratio, std::size_t count);
    /// "geometric(start, ratio, count)" or a comma separated list.
    static EpsilonGrid parse(const std::string& text);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

private:
    std::vector<double> values_;
};

/// A function sampled on nodes x with quadrature weights (for L2).
struct SampledFunction {
    std::vector<double> x;
    std::vector<double> values;
    std::vector<double> weights;
};

enum class Seminorm { kSup, kL2 };

class GeneralizedNet {
public:
    using Payload = std::variant<double, SampledFunction>;

    GeneralizedNet(EpsilonGrid grid, std::vector<Payload> payload);
    static GeneralizedNet from(const EpsilonGrid& grid,
                               const std::function<Payload(double eps)>& make);

    const EpsilonGrid& grid() const { return grid_; }
    const Payload& at(std::size_t k) const { return payload_[k]; }
    std::size_t size() const { return payload_.size(); }
    /// |value| for numbers; sup |f| or (sum w f^2)^(1/2) for sampled functions.
    double seminorm(std::size_t k, Seminorm p) const;

private:
    EpsilonGrid grid_;
    std::vector<Payload> payload_;
};

/// Least-squares slope of log p(u_eps) against log eps. Needs >= 4 points;
/// throws DegenerateNet if any seminorm vanishes.
double moderateness_slope(const GeneralizedNet& net, Seminorm p);

/// Least-squares slope of log y against log x (shared by the net and the
/// family check).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace lwreg
