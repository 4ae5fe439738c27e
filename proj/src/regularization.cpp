#include "lwreg/regularization.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/quadrature.hpp"
#include "lwreg/simd/kernels.hpp"
#include "spec_parse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace lwreg {

namespace {

constexpr std::size_t kPanels = 1024;
constexpr std::size_t kPanelOrder = 20;
constexpr std::size_t kCompletionOrder = 8;

double raw_bump(double s) {
    const double u = 2.0 * s - 3.0;
    const double q = 1.0 - u * u;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double raw_bump_derivative(double s) {
    const double u = 2.0 * s - 3.0;
    const double q = 1.0 - u * u;
    return q > 0.0 ? std::exp(-1.0 / q) * (-4.0 * u / (q * q)) : 0.0;
}

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double t = sum + v;
        c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

} // namespace

Mollifier::Mollifier(Kind kind, std::string label, Density density, Density derivative, double lo,
                     double hi, Smoothness smoothness, double norm)
    : kind_(kind), label_(std::move(label)), density_(std::move(density)),
      derivative_(std::move(derivative)), lo_(lo), hi_(hi), smoothness_(smoothness), norm_(norm) {}

Mollifier Mollifier::bump() {
    Mollifier m(Kind::kBump, "bump", raw_bump, raw_bump_derivative, 1.0, 2.0, Smoothness::kSmooth,
                1.0);
    m.build_table();
    // The raw table total becomes the normalization; dividing the table by
    // it makes cdf(2) exactly 1.
    auto table = std::make_shared<std::vector<double>>(*m.table_);
    const double total = table->back();
    for (double& v : *table) v /= total;
    m.table_ = std::move(table);
    m.norm_ = 1.0 / total;
    m.density_ = [n = m.norm_](double s) { return n * raw_bump(s); };
    m.derivative_ = [n = m.norm_](double s) { return n * raw_bump_derivative(s); };
    return m;
}

Mollifier Mollifier::boxcar() {
    Mollifier m(
        Kind::kBoxcar, "boxcar", [](double s) { return (s > 1.0 && s < 2.0) ? 1.0 : 0.0; }, {}, 1.0,
        2.0, Smoothness::kPiecewise, 1.0);
    m.table_ = std::make_shared<std::vector<double>>(std::vector<double>{0.0, 1.0});
    return m;
}

Mollifier Mollifier::custom(std::string label, Density density, Density derivative, double lo,
                            double hi, Smoothness smoothness) {
    if (!density) throw InvalidArgument("custom mollifier needs a density");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("custom mollifier needs a finite support lo < hi");
    if (smoothness == Smoothness::kSmooth && !derivative)
        throw InvalidArgument("smooth custom mollifier needs a derivative");
    Mollifier m(Kind::kCustom, std::move(label), std::move(density), std::move(derivative), lo, hi,
                smoothness, 1.0);
    m.build_table();
    return m;
}

void Mollifier::build_table() {
    auto table = std::make_shared<std::vector<double>>(kPanels + 1, 0.0);
    const double h = (hi_ - lo_) / static_cast<double>(kPanels);
    std::vector<double> x, w, fx(kPanelOrder);
    CompensatedSum acc;
    for (std::size_t j = 0; j < kPanels; ++j) {
        const double a = lo_ + static_cast<double>(j) * h;
        quad::mapped_rule(kPanelOrder, a, a + h, x, w);
        density(x, fx);
        acc.add(simd::dot(w, fx));
        (*table)[j + 1] = acc.value();
    }
    table_ = std::move(table);
}

double Mollifier::operator()(double s) const { return density_(s); }

double Mollifier::derivative(double s) const {
    if (!smooth() || !derivative_)
        throw SmoothnessRequired("derivative of the piecewise mollifier '" + label_ + "'");
    return derivative_(s);
}

void Mollifier::density(std::span<const double> s, std::span<double> out) const {
    if (kind_ == Kind::kBump) {
        simd::bump_density(s, out, norm_);
        return;
    }
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = density_(s[i]);
}

void Mollifier::density_derivative(std::span<const double> s, std::span<double> out) const {
    if (!smooth() || !derivative_)
        throw SmoothnessRequired("derivative of the piecewise mollifier '" + label_ + "'");
    if (kind_ == Kind::kBump) {
        simd::bump_derivative(s, out, norm_);
        return;
    }
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = derivative_(s[i]);
}

double Mollifier::cdf(double s) const {
    if (!(s > lo_)) return 0.0;
    if (s >= hi_) return table_->back();
    if (kind_ == Kind::kBoxcar) return s - 1.0;
    const double h = (hi_ - lo_) / static_cast<double>(kPanels);
    const auto j = std::min<std::size_t>(static_cast<std::size_t>((s - lo_) / h), kPanels - 1);
    const double a = lo_ + static_cast<double>(j) * h;
    if (s <= a) return (*table_)[j];
    std::array<double, kCompletionOrder> x{}, w{}, fx{};
    const quad::Rule& r = quad::gauss_legendre(kCompletionOrder);
    const double half = 0.5 * (s - a);
    for (std::size_t i = 0; i < kCompletionOrder; ++i) {
        x[i] = a + half * (1.0 + r.nodes[i]);
        w[i] = half * r.weights[i];
    }
    density(x, fx);
    return (*table_)[j] + simd::dot(w, fx);
}

double Mollifier::mass() const { return table_->back(); }

HeavisideFamily HeavisideFamily::unchecked(Mollifier chi) { return HeavisideFamily(std::move(chi)); }

namespace {
void check_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0,1], got " + fmt17(eps));
}
} // namespace

double HeavisideFamily::H(double r, double eps) const {
    check_eps(eps);
    return chi_.cdf(r / eps);
}

double HeavisideFamily::dH(double r, double eps) const {
    check_eps(eps);
    return chi_(r / eps) / eps;
}

double HeavisideFamily::d2H(double r, double eps) const {
    check_eps(eps);
    if (!smooth()) throw SmoothnessRequired("H'' of the piecewise family '" + chi_.label() + "'");
    return chi_.derivative(r / eps) / (eps * eps);
}

HeavisideFamily make_family(const Mollifier& chi) {
    const double slack = 1e-15;
    if (chi.support_lo() < 1.0 - slack || chi.support_hi() > 2.0 + slack)
        throw InvalidMollifier("support [" + fmt17(chi.support_lo()) + ", " +
                               fmt17(chi.support_hi()) + "] exceeds [1,2]");
    // The declared support is taken on trust only after probing outside it.
    for (int k = 0; k <= 64; ++k) {
        const double below = -1.0 + 2.0 * k / 64.0 * (1.0 - 1e-9);
        const double above = 2.0 + 1e-9 + 2.0 * k / 64.0;
        for (double s : {below, above})
            if (chi(s) != 0.0)
                throw InvalidMollifier("density nonzero at s = " + fmt17(s) + ", outside [1,2]");
    }
    for (int k = 0; k <= 256; ++k) {
        const double s = chi.support_lo() + (chi.support_hi() - chi.support_lo()) * k / 256.0;
        if (chi(s) < 0.0) throw InvalidMollifier("negative density at s = " + fmt17(s));
    }
    const double mass = quad::adaptive([&](double s) { return chi(s); }, chi.support_lo(),
                                       chi.support_hi(), 1e-12, 1e-13);
    if (std::abs(mass - 1.0) > 1e-10)
        throw InvalidMollifier("integral of the density is " + fmt17(mass) + ", not 1");
    return HeavisideFamily(chi);
}

Mollifier mollifier_by_name(const std::string& name) {
    const std::string n = detail::trim(name);
    if (n == "bump") return Mollifier::bump();
    if (n == "boxcar") return Mollifier::boxcar();
    throw ParseError("unknown mollifier '" + n + "' (expected bump | boxcar)");
}

FamilyReport family_check(const HeavisideFamily& H, std::span<const double> eps_grid,
                          std::span<const double> r_grid, double tol) {
    if (eps_grid.empty() || r_grid.empty()) throw InvalidArgument("family_check: empty grid");
    FamilyReport rep;
    std::vector<double> probes{0.0, 0.5, 1.0};
    for (int k = 1; k < 128; ++k) probes.push_back(1.0 + k / 128.0);
    probes.insert(probes.end(), {2.0, 2.5, 3.0});

    auto note = [&](bool& flag, const std::string& what) {
        if (flag) rep.violations.push_back(what);
        flag = false;
    };

    std::vector<double> sups;
    for (double eps : eps_grid) {
        double sup = 0.0;
        auto visit = [&](double r) {
            const double h = H.H(r, eps);
            const double d = H.dH(r, eps);
            if (h < 0.0 || d < 0.0)
                note(rep.nonnegative, "(i) H = " + fmt17(h) + ", H' = " + fmt17(d) + " at r = " +
                                          fmt17(r) + ", eps = " + fmt17(eps));
            if (r <= eps && std::abs(h) > tol)
                note(rep.vanishes_below, "(ii) H = " + fmt17(h) + " at r = " + fmt17(r) +
                                             " <= eps = " + fmt17(eps));
            if (r >= 2.0 * eps && std::abs(h - 1.0) > tol)
                note(rep.one_above, "(iii) H = " + fmt17(h) + " at r = " + fmt17(r) +
                                        " >= 2 eps, eps = " + fmt17(eps));
            const double v = eps * d;
            if (!std::isfinite(v))
                note(rep.bounded_derivative, "(iv) eps H' not finite at r = " + fmt17(r));
            if (v > sup) {
                sup = v;
                if (v > rep.sup_eps_dH) {
                    rep.sup_eps_dH = v;
                    rep.sup_r = r;
                    rep.sup_eps = eps;
                }
            }
        };
        for (double r : r_grid) visit(r);
        for (double s : probes) visit(s * eps);
        sups.push_back(sup);
    }
    // Uniform boundedness judged by the trend of sup eps H' across the grid.
    if (sups.size() >= 2 && std::all_of(sups.begin(), sups.end(), [](double v) { return v > 0.0; })) {
        rep.bound_slope = loglog_slope(eps_grid, sups);
        if (std::abs(rep.bound_slope) > 0.05)
            note(rep.bounded_derivative,
                 "(iv) sup eps H' scales like eps^" + fmt17(rep.bound_slope));
    }
    return rep;
}

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("epsilon_grid is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0 && values_[i] <= 1.0))
            throw InvalidArgument("epsilon_grid out of (0,1]: " + fmt17(values_[i]));
        if (i > 0 && !(values_[i] < values_[i - 1]))
            throw InvalidArgument("epsilon_grid not strictly decreasing at " + fmt17(values_[i]));
    }
}

EpsilonGrid EpsilonGrid::geometric(double start, double ratio, std::size_t count) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw InvalidArgument("epsilon_grid ratio must lie in (0,1), got " + fmt17(ratio));
    if (count == 0) throw InvalidArgument("epsilon_grid count must be positive");
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = start * std::pow(ratio, static_cast<double>(k));
    return EpsilonGrid(std::move(v));
}

EpsilonGrid EpsilonGrid::parse(const std::string& text) {
    const std::string t = detail::trim(text);
    if (t.find('(') != std::string::npos) {
        const auto call = detail::parse_call(t);
        if (call.name != "geometric" || call.args.size() != 3)
            throw ParseError("expected geometric(start, ratio, count), got '" + t + "'");
        const double count = call.args[2];
        if (!(count >= 1.0) || count != std::floor(count) || count > 1e6)
            throw ParseError("epsilon_grid count must be a positive integer");
        return geometric(call.args[0], call.args[1], static_cast<std::size_t>(count));
    }
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
        const auto comma = t.find(',', start);
        v.push_back(detail::parse_number(t.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return EpsilonGrid(std::move(v));
}

GeneralizedNet::GeneralizedNet(EpsilonGrid grid, std::vector<Payload> payload)
    : grid_(std::move(grid)), payload_(std::move(payload)) {
    if (payload_.size() != grid_.size())
        throw InvalidArgument("net payload count does not match the epsilon grid");
    for (const auto& p : payload_)
        if (const auto* f = std::get_if<SampledFunction>(&p))
            if (f->x.size() != f->values.size() ||
                (!f->weights.empty() && f->weights.size() != f->values.size()))
                throw InvalidArgument("sampled function arrays differ in length");
}

GeneralizedNet GeneralizedNet::from(const EpsilonGrid& grid,
                                    const std::function<Payload(double)>& make) {
    std::vector<Payload> payload;
    payload.reserve(grid.size());
    for (double eps : grid) payload.push_back(make(eps));
    return GeneralizedNet(grid, std::move(payload));
}

double GeneralizedNet::seminorm(std::size_t k, Seminorm p) const {
    const Payload& u = payload_.at(k);
    if (const double* v = std::get_if<double>(&u)) return std::abs(*v);
    const auto& f = std::get<SampledFunction>(u);
    if (p == Seminorm::kSup) return simd::max_abs(f.values);
    if (f.weights.empty()) throw InvalidArgument("L2 seminorm needs quadrature weights");
    return std::sqrt(simd::weighted_square_sum(f.weights, f.values));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need >= 2 pairs");
    double sx = 0.0, sy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("loglog_slope: nonpositive value");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

double moderateness_slope(const GeneralizedNet& net, Seminorm p) {
    if (net.size() < 4) throw InvalidArgument("moderateness_slope needs at least 4 grid points");
    std::vector<double> values(net.size());
    for (std::size_t k = 0; k < net.size(); ++k) {
        values[k] = net.seminorm(k, p);
        if (values[k] == 0.0)
            throw DegenerateNet("seminorm vanishes at eps = " + fmt17(net.grid()[k]) +
                                ": negligible at machine precision");
    }
    return loglog_slope(net.grid().values(), values);
}

} // namespace lwreg
