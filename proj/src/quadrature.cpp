#include "lwreg/quadrature.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/simd/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

namespace lwreg::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Rule compute_rule(std::size_t n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

} // namespace

const Rule& gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_legendre: n must be positive");
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        if (n == 1)
            slot = std::make_unique<Rule>(Rule{{0.0}, {2.0}});
        else
            slot = std::make_unique<Rule>(compute_rule(n));
    }
    return *slot;
}

void mapped_rule(std::size_t n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const Rule& r = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    x.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = mid + half * r.nodes[i];
        w[i] = half * r.weights[i];
    }
}

double gl(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    std::vector<double> x, w, fx(n);
    mapped_rule(n, a, b, x, w);
    for (std::size_t i = 0; i < n; ++i) fx[i] = f(x[i]);
    return simd::dot(w, fx);
}

double gl_composite(const std::function<double(double)>& f, double a, double b, std::size_t n,
                    std::size_t panels) {
    if (panels == 0) throw InvalidArgument("gl_composite: panels must be positive");
    const double h = (b - a) / static_cast<double>(panels);
    double s = 0.0;
    for (std::size_t p = 0; p < panels; ++p) s += gl(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, unsigned max_depth) {
    using boost::math::quadrature::gauss_kronrod;
    if (std::isinf(b)) {
        double err = 0.0;
        double l1 = 0.0;
        const double value =
            gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
        if (!std::isfinite(value)) throw NoConvergence(static_cast<int>(max_depth), value);
        if (err > std::max({abs_tol, rel_tol * std::abs(value), 64.0 * kEps * l1}) * 10.0)
            throw NoConvergence(static_cast<int>(max_depth), err);
        return value;
    }

    // Global adaptive bisection on the segment with the largest error
    // estimate. The stopping test includes a roundoff floor proportional to
    // the L1 norm, below which Kronrod-Gauss differences carry no information.
    struct Segment {
        double a, b, value, err, l1;
        bool operator<(const Segment& o) const { return err < o.err; }
    };
    // Kronrod-31 and its embedded Gauss-15 from Boost's node tables; Boost's
    // own single-panel error estimate has a width-independent floor.
    using kronrod = gauss_kronrod<double, 31>;
    const auto& xk = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 15>::weights();
    auto eval = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        // xk[0] = 0 is a Gauss node; odd indices are Kronrod-only.
        const double f0 = f(mid);
        double k = wk[0] * f0;
        double g = wg[0] * f0;
        double l1 = wk[0] * std::abs(f0);
        for (std::size_t i = 1; i < xk.size(); ++i) {
            const double fp = f(mid + half * xk[i]);
            const double fm = f(mid - half * xk[i]);
            k += wk[i] * (fp + fm);
            l1 += wk[i] * (std::abs(fp) + std::abs(fm));
            if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
        }
        return Segment{lo, hi, half * k, std::abs(half * (k - g)), std::abs(half) * l1};
    };
    std::priority_queue<Segment> heap;
    heap.push(eval(a, b));
    const std::size_t max_segments = std::size_t{1} << std::min(max_depth, 16u);
    while (true) {
        double value = 0.0, err = 0.0, l1 = 0.0;
        {
            auto copy = heap;
            while (!copy.empty()) {
                value += copy.top().value;
                err += copy.top().err;
                l1 += copy.top().l1;
                copy.pop();
            }
        }
        if (!std::isfinite(value)) throw NoConvergence(static_cast<int>(heap.size()), value);
        const double target = std::max({abs_tol, rel_tol * std::abs(value), 64.0 * kEps * l1});
        if (err <= target) return value;
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (heap.size() >= max_segments || !(mid > worst.a && mid < worst.b))
            throw NoConvergence(static_cast<int>(heap.size()), err);
        heap.pop();
        heap.push(eval(worst.a, mid));
        heap.push(eval(mid, worst.b));
    }
}

} // namespace lwreg::quad
