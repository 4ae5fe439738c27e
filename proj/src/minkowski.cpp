#include "lwreg/minkowski.hpp"

#include "lwreg/errors.hpp"
#include "spec_parse.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace lwreg {

std::ostream& operator<<(std::ostream& os, const FourVector& v) {
    return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ')';
}

double max_abs(const FourVector& v) {
    double m = 0.0;
    for (double c : v.x) m = std::max(m, std::abs(c));
    return m;
}

Worldline Worldline::rest() {
    return Worldline(
        "rest", [](double tau) { return FourVector{tau, 0.0, 0.0, 0.0}; },
        [](double) { return FourVector{1.0, 0.0, 0.0, 0.0}; },
        [](double) { return FourVector{}; }, {});
}

Worldline Worldline::boost(double v) {
    if (!(std::abs(v) < 1.0)) throw InvalidArgument("boost velocity must satisfy |v| < 1");
    const double gamma = 1.0 / std::sqrt(1.0 - v * v);
    const FourVector u{gamma, gamma * v, 0.0, 0.0};
    return Worldline(
        "boost", [u](double tau) { return tau * u; }, [u](double) { return u; },
        [](double) { return FourVector{}; }, {{"v", v}});
}

Worldline Worldline::hyperbolic(double a) {
    if (!(a > 0.0)) throw InvalidArgument("hyperbolic acceleration must be positive");
    return Worldline(
        "hyperbolic",
        [a](double tau) {
            return FourVector{std::sinh(a * tau) / a, std::cosh(a * tau) / a, 0.0, 0.0};
        },
        [a](double tau) {
            return FourVector{std::cosh(a * tau), std::sinh(a * tau), 0.0, 0.0};
        },
        [a](double tau) {
            return FourVector{a * std::sinh(a * tau), a * std::cosh(a * tau), 0.0, 0.0};
        },
        {{"a", a}});
}

Worldline Worldline::circular(double r, double omega) {
    if (!(r > 0.0)) throw InvalidArgument("circular radius must be positive");
    const double speed = r * std::abs(omega);
    if (!(speed < 1.0)) throw InvalidArgument("circular motion must satisfy r*|omega| < 1");
    const double gamma = 1.0 / std::sqrt(1.0 - speed * speed);
    // lab phase omega*t with t = gamma*tau
    const double w = omega * gamma;
    return Worldline(
        "circular",
        [=](double tau) {
            return FourVector{gamma * tau, r * std::cos(w * tau), r * std::sin(w * tau), 0.0};
        },
        [=](double tau) {
            return FourVector{gamma, -r * w * std::sin(w * tau), r * w * std::cos(w * tau), 0.0};
        },
        [=](double tau) {
            return FourVector{0.0, -r * w * w * std::cos(w * tau), -r * w * w * std::sin(w * tau),
                              0.0};
        },
        {{"r", r}, {"omega", omega}});
}

Worldline Worldline::custom(std::string label, Evaluator position, Evaluator velocity,
                            Evaluator acceleration, std::map<std::string, double> params) {
    return Worldline(std::move(label), std::move(position), std::move(velocity),
                     std::move(acceleration), std::move(params));
}

std::string Worldline::spec() const {
    std::ostringstream os;
    os.precision(17);
    if (label_ == "boost")
        os << "boost(" << params_.at("v") << ')';
    else if (label_ == "hyperbolic")
        os << "hyperbolic(" << params_.at("a") << ')';
    else if (label_ == "circular")
        os << "circular(" << params_.at("r") << ", " << params_.at("omega") << ')';
    else
        os << label_;
    return os.str();
}

WorldlineState worldline_eval(const Worldline& w, double tau) { return w.eval(tau); }

Worldline parse_worldline(const std::string& spec) {
    const auto call = detail::parse_call(spec);
    const auto need = [&](std::size_t n) {
        if (call.args.size() != n)
            throw ParseError("worldline '" + call.name + "' expects " + std::to_string(n) +
                             " argument(s)");
    };
    if (call.name == "rest") {
        need(0);
        return Worldline::rest();
    }
    if (call.name == "boost") {
        need(1);
        return Worldline::boost(call.args[0]);
    }
    if (call.name == "hyperbolic") {
        need(1);
        return Worldline::hyperbolic(call.args[0]);
    }
    if (call.name == "circular") {
        need(2);
        return Worldline::circular(call.args[0], call.args[1]);
    }
    throw ParseError("unknown worldline '" + call.name + "'");
}

double parameter_at_lab_time(const Worldline& w, double t) {
    // Z0 is increasing with slope Zdot0 >= 1.
    double tau = t;
    for (int it = 0; it < 100; ++it) {
        const double f = w.position(tau)[0] - t;
        const double df = w.velocity(tau)[0];
        const double step = f / df;
        tau -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(tau))) return tau;
    }
    throw NoConvergence(100, w.position(tau)[0] - t);
}

WorldlineReport validate_worldline(const Worldline& w, std::span<const double> tau_grid,
                                   double tolerance) {
    if (tau_grid.empty()) throw InvalidArgument("validate_worldline needs a nonempty grid");
    WorldlineReport report;
    report.min_time_component = std::numeric_limits<double>::infinity();
    double worst_norm_tau = tau_grid.front();
    double worst_orth_tau = tau_grid.front();
    double worst_time_tau = tau_grid.front();
    for (double tau : tau_grid) {
        const auto s = w.eval(tau);
        const double norm_res = std::abs(minkowski_inner(s.velocity, s.velocity) - 1.0);
        const double orth_res = std::abs(minkowski_inner(s.velocity, s.acceleration));
        if (norm_res > report.max_norm_residual) {
            report.max_norm_residual = norm_res;
            worst_norm_tau = tau;
        }
        if (orth_res > report.max_orthogonality_residual) {
            report.max_orthogonality_residual = orth_res;
            worst_orth_tau = tau;
        }
        if (s.velocity[0] < report.min_time_component) {
            report.min_time_component = s.velocity[0];
            worst_time_tau = tau;
        }
    }
    std::ostringstream os;
    os.precision(17);
    if (report.max_norm_residual > tolerance) {
        os << "eigentime normalization |Zdot.Zdot - 1| = " << report.max_norm_residual
           << " at tau = " << worst_norm_tau;
        report.failures.push_back(os.str());
        os.str({});
    }
    if (report.max_orthogonality_residual > tolerance) {
        os << "orthogonality |Zdot.Zddot| = " << report.max_orthogonality_residual
           << " at tau = " << worst_orth_tau;
        report.failures.push_back(os.str());
        os.str({});
    }
    if (!(report.min_time_component > 0.0)) {
        os << "not future-directed: Zdot0 = " << report.min_time_component
           << " at tau = " << worst_time_tau;
        report.failures.push_back(os.str());
    }
    report.pass = report.failures.empty();
    return report;
}

} // namespace lwreg
