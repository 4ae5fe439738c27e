#include "commands.hpp"

#include "lwreg/association.hpp"
#include "lwreg/distalg.hpp"
#include "lwreg/errors.hpp"
#include "lwreg/fields.hpp"
#include "lwreg/quadrature.hpp"
#include "lwreg/retarded.hpp"
#include "lwreg/selfenergy.hpp"

#include <fmt/format.h>
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>

namespace lwreg::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v + 0.0); }

json vec(const FourVector& v) { return json::array({v[0], v[1], v[2], v[3]}); }

/// Writes to `path` if set, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write output file '" + path + "'");
    f << text;
}

void emit_json(const RunConfig& cfg, std::ostream& out, const json& j) {
    emit(cfg.json_path, out, j.dump(2) + "\n");
}

int kinematics_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    json records = json::array();
    bool ok = true;
    for (const FourVector& X : cfg.observers()) {
        try {
            const RetardedKinematics k = kinematics(cfg.worldline, X);
            records.push_back({{"X", vec(X)},
                               {"tau_r", k.tau_r},
                               {"xi", k.xi},
                               {"K", vec(k.K)},
                               {"kappa", k.kappa},
                               {"residual", k.residual}});
        } catch (const Error& e) {
            ok = false;
            records.push_back({{"X", vec(X)}, {"error", e.kind()}, {"message", e.what()}});
            err << "error: " << e.kind() << ": " << e.what() << "\n";
        }
    }
    emit_json(cfg, out, records);
    return ok ? kPass : kVerdictFailure;
}

int fields_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HeavisideFamily H = make_family(mollifier_by_name(cfg.mollifier));
    const double eps = cfg.field_eps();
    std::string csv = "X0,X1,X2,X3,eps,Phi0,Phi1,Phi2,Phi3,Lambda0,Lambda1,Lambda2,Lambda3,"
                      "Psi0,Psi1,Psi2,Psi3,BoxPhi0,BoxPhi1,BoxPhi2,BoxPhi3\n";
    bool ok = true;
    for (const FourVector& X : cfg.observers()) {
        try {
            const FieldPoint p = field_point(cfg.worldline, H, X, eps, cfg.charge, {}, cfg.psi_form);
            std::vector<double> row{X[0], X[1], X[2], X[3], eps};
            for (const FourVector* v : {&p.Phi, &p.Lambda, &p.Psi, &p.BoxPhi})
                for (std::size_t mu = 0; mu < 4; ++mu) row.push_back((*v)[mu]);
            for (std::size_t i = 0; i < row.size(); ++i) csv += (i ? "," : "") + num(row[i]);
            csv += "\n";
        } catch (const Error& e) {
            ok = false;
            err << "error: " << e.kind() << ": " << e.what() << " at X = (" << num(X[0]) << ", "
                << num(X[1]) << ", " << num(X[2]) << ", " << num(X[3]) << ")\n";
        }
    }
    emit(cfg.csv_path, out, csv);
    return ok ? kPass : kVerdictFailure;
}

json claim_json(const AssociationResult& r) {
    return {{"claim", r.claim},   {"eps", r.eps},       {"pairing", r.pairing}, {"limit", r.limit},
            {"order", r.order},   {"target", r.target}, {"pass", r.pass}};
}

int associate_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HeavisideFamily H = make_family(mollifier_by_name(cfg.mollifier));
    const AssociationReport rep = association_suite(cfg.worldline, H, cfg.association);
    json records = json::array();
    for (const auto& c : rep.claims) {
        records.push_back(claim_json(c));
        if (!c.pass) err << "fail: " << c.claim << ": " << c.reason << "\n";
    }
    for (const auto& s : rep.skipped) err << "skipped: " << s << "\n";
    err << "info: sup|Psi| moderateness slope " << num(rep.psi_sup_slope) << "\n";
    emit_json(cfg, out, records);
    return rep.pass() ? kPass : kVerdictFailure;
}

int selfenergy_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HeavisideFamily H = make_family(mollifier_by_name(cfg.mollifier));
    const SelfEnergyReport rep = self_energy_report(H, cfg.grid, cfg.charge, cfg.moment, cfg.scaling_tol);
    std::string csv = "eps,U_ele,U_mag,eps_Uele,eps3_Umag,c_eps,bound,pass\n";
    for (const auto& r : rep.rows)
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.eps), num(r.U_ele), num(r.U_mag),
                           num(r.eps_Uele), num(r.eps3_Umag), num(r.c_eps), num(r.bound), r.pass ? 1 : 0);
    for (const auto& v : rep.violations) err << "fail: " << v << "\n";
    emit(cfg.csv_path, out, csv);
    return rep.pass() ? kPass : kVerdictFailure;
}

int renormalize_cmd(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
    const std::optional<double> mc2 = opts.mc2 ? opts.mc2 : cfg.mc2;
    if (!mc2) throw InvalidArgument("renormalize needs a target: --mc2 or [selfenergy] mc2");
    const HeavisideFamily H = make_family(mollifier_by_name(cfg.mollifier));
    const Renormalization r = mass_renormalize(H, cfg.charge, cfg.moment, *mc2, cfg.renormalize_tol);
    emit_json(cfg, out, json{{"eps0", r.eps0}, {"residual", r.residual}});
    return kPass;
}

int distalg_solve_cmd(const CommandOptions& opts, std::ostream& out) {
    const dist::EulerSolution s = dist::solve_euler_delta(opts.max_order);
    out << "particular: " << dist::to_string(s.particular) << "\n";
    for (const auto& h : s.homogeneous) out << "homogeneous: " << dist::to_string(h) << "\n";
    return kPass;
}

int distalg_verify_cmd(const CommandOptions& opts, std::ostream& out) {
    if (opts.expr.empty()) throw InvalidArgument("distalg verify needs an expression");
    out << dist::to_string(dist::euler_apply(dist::parse(opts.expr), opts.max_order)) << "\n";
    return kPass;
}

// ---- check ------------------------------------------------------------

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

SuiteResult suite_worldline(const RunConfig& cfg) {
    std::vector<double> taus;
    for (int i = 0; i <= 200; ++i) taus.push_back(-3.0 + 6.0 * i / 200.0);
    const WorldlineReport r = validate_worldline(cfg.worldline, taus);
    return {"worldline", r.pass,
            fmt::format("max |Zdot.Zdot-1| {:.3g}, max |Zdot.Zddot| {:.3g}", r.max_norm_residual,
                        r.max_orthogonality_residual)};
}

/// Points X = Z(tau) + xi K with known retarded time tau and distance xi.
struct ShellPoint {
    FourVector X;
    double tau;
    double xi;
};

ShellPoint sample_point(const Worldline& w, std::mt19937_64& rng, double xi_lo, double xi_hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double tau = -1.0 + 2.0 * u(rng);
    const double z = 2.0 * u(rng) - 1.0;
    const double ph = 2.0 * std::numbers::pi * u(rng);
    const double s = std::sqrt(1.0 - z * z);
    const double xi = xi_lo + (xi_hi - xi_lo) * u(rng);
    const FourVector K = null_direction(w.velocity(tau), {s * std::cos(ph), s * std::sin(ph), z});
    return {w.position(tau) + xi * K, tau, xi};
}

SuiteResult suite_retarded(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    double worst_tau = 0.0, worst_kz = 0.0, worst_kk = 0.0;
    for (int i = 0; i < 200; ++i) {
        const ShellPoint p = sample_point(cfg.worldline, rng, 0.05, 2.0);
        const RetardedKinematics k = kinematics(cfg.worldline, p.X);
        worst_tau = std::max(worst_tau, std::abs(k.tau_r - p.tau));
        worst_kz = std::max(worst_kz, std::abs(minkowski_inner(k.K, k.velocity) - 1.0));
        worst_kk = std::max(worst_kk, std::abs(minkowski_inner(k.K, k.K)));
    }
    const bool pass = worst_tau <= 1e-9 && worst_kz <= 1e-9 && worst_kk <= 1e-9;
    return {"retarded", pass,
            fmt::format("max |tau_r - tau| {:.3g}, |K.Zdot-1| {:.3g}, |K.K| {:.3g}", worst_tau, worst_kz,
                        worst_kk)};
}

SuiteResult suite_family(const RunConfig& cfg, const HeavisideFamily& H) {
    std::vector<double> r;
    for (int i = 0; i <= 400; ++i) r.push_back(2.5 * i / 400.0);
    const FamilyReport rep = family_check(H, cfg.grid.values(), r);
    return {"regularization", rep.pass(),
            rep.pass() ? fmt::format("sup eps H' = {:.6g}", rep.sup_eps_dH) : rep.violations.front()};
}

std::vector<SuiteResult> suite_fields(const RunConfig& cfg, const HeavisideFamily& H) {
    if (!H.smooth()) return {{"fields", true, "skipped: piecewise family has no H''"}};
    std::mt19937_64 rng(cfg.seed + 1);
    const double eps = cfg.field_eps();
    double outside = 0.0, shell_rederived = 0.0, shell_printed = 0.0;
    for (int i = 0; i < 40; ++i) {
        const ShellPoint p = sample_point(cfg.worldline, rng, 3.0 * eps, 3.0 * eps + 1.5);
        outside = std::max(outside, compare_box_phi(cfg.worldline, H, p.X, eps, cfg.charge).rel_error);
        const ShellPoint q = sample_point(cfg.worldline, rng, 1.05 * eps, 1.95 * eps);
        shell_rederived = std::max(
            shell_rederived,
            compare_box_phi(cfg.worldline, H, q.X, eps, cfg.charge, PsiForm::kRederived).rel_error);
        shell_printed = std::max(
            shell_printed, compare_box_phi(cfg.worldline, H, q.X, eps, cfg.charge, PsiForm::kPrinted).rel_error);
    }
    return {{"fields box_phi outside shell", outside <= 1e-4, fmt::format("max rel error {:.3g}", outside)},
            {"fields box_phi in shell (rederived Psi)", shell_rederived <= 1e-3,
             fmt::format("max rel error {:.3g}; printed Psi: {:.3g} (informational)", shell_rederived,
                         shell_printed)}};
}

SuiteResult suite_charge(const RunConfig& cfg, const HeavisideFamily& H) {
    if (!H.smooth()) return {"charge", true, "skipped: piecewise family has no H''"};
    double worst = 0.0;
    for (double eps : cfg.grid) {
        const double q = quad::adaptive(
            [&](double r) { return 4.0 * std::numbers::pi * r * r * static_rho(H, r, eps, cfg.charge); }, eps,
            2.0 * eps, 0.0, 1e-13);
        worst = std::max(worst, std::abs(q - cfg.charge) / std::max(std::abs(cfg.charge), 1e-300));
    }
    return {"charge normalization", worst <= 1e-8, fmt::format("max rel error {:.3g}", worst)};
}

SuiteResult suite_selfenergy(const RunConfig& cfg, const HeavisideFamily& H) {
    const SelfEnergyReport rep = self_energy_report(H, cfg.grid, cfg.charge, cfg.moment, cfg.scaling_tol);
    return {"selfenergy", rep.pass(),
            rep.pass() ? fmt::format("eps U_ele spread {:.3g}, eps^3 U_mag spread {:.3g}, c0 {:.6g}",
                                     rep.spread_eps_Uele, rep.spread_eps3_Umag, rep.c0)
                       : rep.violations.front()};
}

SuiteResult suite_renormalize(const RunConfig& cfg, const HeavisideFamily& H) {
    const double floor = u_ele(H, cfg.charge, 1.0) + u_mag(H, cfg.moment, 1.0);
    const double target = cfg.mc2 ? *cfg.mc2 : 100.0 * floor;
    const Renormalization r = mass_renormalize(H, cfg.charge, cfg.moment, target, cfg.renormalize_tol);
    const bool pass = std::abs(r.residual) <= cfg.renormalize_tol * target;
    return {"renormalization", pass, fmt::format("eps0 {:.17g}, residual {:.3g}", r.eps0, r.residual)};
}

SuiteResult suite_association(const RunConfig& cfg, const HeavisideFamily& H) {
    if (!H.smooth()) return {"association", true, "skipped: piecewise family"};
    const AssociationReport rep = association_suite(cfg.worldline, H, cfg.association);
    std::string detail = fmt::format("{} claims", rep.claims.size());
    for (const auto& c : rep.claims)
        if (!c.pass) detail = c.claim + ": " + c.reason;
    return {"association", rep.pass(), detail};
}

SuiteResult suite_distalg() {
    using namespace dist;
    bool pass = true;
    for (int n : {0, 1, 4, 8}) {
        const EulerSolution s = solve_euler_delta(n);
        pass = pass && s.particular == DistExpr(Atom::tplus(1)) && s.homogeneous.size() == 2 &&
               euler_apply(s.particular) == DistExpr(Atom::delta(0)) && !s.delta_block_reaches_delta0;
    }
    pass = pass && upsilon(true).base == DistExpr(Atom::theta());
    int leibniz = 0;
    std::vector<Atom> atoms{Atom::mono(0), Atom::mono(3), Atom::delta(0), Atom::delta(4)};
    for (int k = 1; k <= 6; ++k) {
        atoms.push_back(Atom::tplus(k));
        atoms.push_back(Atom::tminus(k));
    }
    for (const Atom& a : atoms) {
        const DistExpr lhs = differentiate(mul_by_t(a));
        const DistExpr rhs = DistExpr(a) + mul_by_t(differentiate(a));
        pass = pass && lhs == rhs;
        ++leibniz;
    }
    return {"distalg", pass, fmt::format("N in {{0,1,4,8}}, upsilon, Leibniz on {} atoms", leibniz)};
}

int check_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HeavisideFamily H = make_family(mollifier_by_name(cfg.mollifier));
    std::vector<SuiteResult> results;
    auto guarded = [&](const std::string& name, const std::function<void()>& f) {
        try {
            f();
        } catch (const Error& e) {
            results.push_back({name, false, e.kind() + ": " + e.what()});
        }
    };
    guarded("worldline", [&] { results.push_back(suite_worldline(cfg)); });
    guarded("retarded", [&] { results.push_back(suite_retarded(cfg)); });
    guarded("regularization", [&] { results.push_back(suite_family(cfg, H)); });
    guarded("fields", [&] {
        for (auto& r : suite_fields(cfg, H)) results.push_back(r);
    });
    guarded("charge normalization", [&] { results.push_back(suite_charge(cfg, H)); });
    guarded("selfenergy", [&] { results.push_back(suite_selfenergy(cfg, H)); });
    guarded("renormalization", [&] { results.push_back(suite_renormalize(cfg, H)); });
    guarded("association", [&] { results.push_back(suite_association(cfg, H)); });
    guarded("distalg", [&] { results.push_back(suite_distalg()); });
    bool all = true;
    std::string text;
    for (const auto& r : results) {
        all = all && r.pass;
        if (!r.pass) err << "fail: " << r.name << ": " << r.detail << "\n";
        text += fmt::format("{}: {} ({})\n", r.name, r.pass ? "pass" : "FAIL", r.detail);
    }
    text += fmt::format("summary: {} of {} suites pass\n",
                        std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; }),
                        results.size());
    out << text;
    return all ? kPass : kVerdictFailure;
}

} // namespace

int exit_code_for(const std::string& kind) {
    static const std::set<std::string> config{"ParseError",        "InvalidArgument", "InvalidMollifier",
                                              "ResolutionTooCoarse", "OutOfRange",      "UnsupportedAtom"};
    return config.count(kind) ? kConfigError : kVerdictFailure;
}

int run(const std::string& command, const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
        std::ostream& err) {
    if (command == "kinematics") return kinematics_cmd(cfg, out, err);
    if (command == "fields eval") return fields_cmd(cfg, out, err);
    if (command == "associate") return associate_cmd(cfg, out, err);
    if (command == "selfenergy") return selfenergy_cmd(cfg, out, err);
    if (command == "renormalize") return renormalize_cmd(cfg, opts, out);
    if (command == "distalg solve") return distalg_solve_cmd(opts, out);
    if (command == "distalg verify") return distalg_verify_cmd(opts, out);
    if (command == "check") return check_cmd(cfg, out, err);
    throw InvalidArgument("unknown command '" + command + "'");
}

} // namespace lwreg::cli
