#include "config.hpp"

#include "lwreg/errors.hpp"
#include "spec_parse.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace lwreg::cli {

namespace {

using detail::parse_call;
using detail::parse_number;
using detail::trim;

std::vector<double> number_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    return out;
}

int positive_int(const std::string& value) {
    const double v = parse_number(value);
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<int>(v)))
        throw InvalidArgument("expected a positive integer, got '" + trim(value) + "'");
    return static_cast<int>(v);
}

int count(const std::string& value) {
    const double v = parse_number(value);
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<int>(v)))
        throw InvalidArgument("expected a non-negative integer, got '" + trim(value) + "'");
    return static_cast<int>(v);
}

double eps_value(const std::string& value) {
    const double v = parse_number(value);
    if (!(v > 0.0 && v <= 1.0)) throw InvalidArgument("eps out of (0,1]: " + trim(value));
    return v;
}

/// bump(radius, c0, c1, ...) with one center coordinate per dimension.
TestFunction test_function(const std::string& value, int dim, std::vector<double> modulation) {
    const auto call = parse_call(value);
    if (call.name != "bump") throw ParseError("unknown test function '" + call.name + "'");
    if (static_cast<int>(call.args.size()) != dim + 1)
        throw ParseError("bump needs a radius and " + std::to_string(dim) + " center coordinates");
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) c[i] = call.args[i + 1];
    return TestFunction(dim, c, call.args[0], std::move(modulation));
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

struct Pending {
    std::string test4;
    std::string test3;
    std::vector<double> modulation4{1.0, 0.3};
    std::vector<double> modulation3{1.0, 0.4};
};

std::map<std::string, std::map<std::string, Setter>> setters(Pending& p) {
    std::map<std::string, std::map<std::string, Setter>> s;
    auto& g = s["general"];
    g["worldline"] = [](RunConfig& c, const std::string& v) {
        c.worldline = parse_worldline(v);
        c.worldline_spec = trim(v);
    };
    g["mollifier"] = [](RunConfig& c, const std::string& v) {
        mollifier_by_name(trim(v));
        c.mollifier = trim(v);
    };
    g["epsilon_grid"] = [](RunConfig& c, const std::string& v) { c.grid = EpsilonGrid::parse(v); };
    g["charge"] = [](RunConfig& c, const std::string& v) { c.charge = parse_number(v); };
    g["moment"] = [](RunConfig& c, const std::string& v) { c.moment = parse_number(v); };
    g["psi_form"] = [](RunConfig& c, const std::string& v) {
        const std::string t = trim(v);
        if (t == "printed")
            c.psi_form = PsiForm::kPrinted;
        else if (t == "rederived")
            c.psi_form = PsiForm::kRederived;
        else
            throw ParseError("psi_form must be printed or rederived");
    };

    auto& o = s["observers"];
    o["point"] = [](RunConfig& c, const std::string& v) {
        const auto x = number_list(v);
        if (x.size() != 4) throw ParseError("point needs 4 coordinates t, x, y, z");
        c.points.push_back({x[0], x[1], x[2], x[3]});
    };
    o["random"] = [](RunConfig& c, const std::string& v) { c.random_points = count(v); };
    o["seed"] = [](RunConfig& c, const std::string& v) {
        c.seed = static_cast<std::uint64_t>(count(v));
    };
    o["extent"] = [](RunConfig& c, const std::string& v) {
        c.extent = parse_number(v);
        if (!(c.extent > 0.0)) throw InvalidArgument("extent must be positive");
    };
    o["eps"] = [](RunConfig& c, const std::string& v) { c.eps = eps_value(v); };

    auto& a = s["association"];
    a["test4"] = [&p](RunConfig&, const std::string& v) { p.test4 = v; };
    a["test3"] = [&p](RunConfig&, const std::string& v) { p.test3 = v; };
    a["modulation4"] = [&p](RunConfig&, const std::string& v) { p.modulation4 = number_list(v); };
    a["modulation3"] = [&p](RunConfig&, const std::string& v) { p.modulation3 = number_list(v); };
    a["tolerance"] = [](RunConfig& c, const std::string& v) {
        c.association.tolerance = parse_number(v);
        if (!(c.association.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    };

    auto& q = s["quadrature"];
    auto int_field = [](int QuadratureSpec::*field) {
        return [field](RunConfig& c, const std::string& v) { c.association.quad.*field = positive_int(v); };
    };
    q["time_panels"] = int_field(&QuadratureSpec::time_panels);
    q["time_nodes"] = int_field(&QuadratureSpec::time_nodes);
    q["polar_nodes"] = int_field(&QuadratureSpec::polar_nodes);
    q["azimuth_nodes"] = int_field(&QuadratureSpec::azimuth_nodes);
    q["inner_nodes"] = int_field(&QuadratureSpec::inner_nodes);
    q["shell_nodes"] = int_field(&QuadratureSpec::shell_nodes);
    q["outer_panels"] = int_field(&QuadratureSpec::outer_panels);
    q["outer_nodes"] = int_field(&QuadratureSpec::outer_nodes);
    q["shell_spacing"] = [](RunConfig& c, const std::string& v) {
        c.association.quad.shell_spacing = parse_number(v);
        c.association.quad.validate(1.0);
    };

    auto& se = s["selfenergy"];
    se["mc2"] = [](RunConfig& c, const std::string& v) { c.mc2 = parse_number(v); };
    se["scaling_tol"] = [](RunConfig& c, const std::string& v) { c.scaling_tol = parse_number(v); };
    se["renormalize_tol"] = [](RunConfig& c, const std::string& v) {
        c.renormalize_tol = parse_number(v);
    };

    auto& out = s["output"];
    out["csv"] = [](RunConfig& c, const std::string& v) { c.csv_path = trim(v); };
    out["json"] = [](RunConfig& c, const std::string& v) { c.json_path = trim(v); };
    return s;
}

} // namespace

std::vector<FourVector> RunConfig::observers() const {
    std::vector<FourVector> out = points;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-extent, extent);
    for (int i = 0; i < random_points; ++i) {
        FourVector x;
        for (std::size_t mu = 0; mu < 4; ++mu) x[mu] = u(rng);
        out.push_back(x);
    }
    return out;
}

double RunConfig::field_eps() const { return eps ? *eps : grid[0]; }

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    Pending pending;
    const auto table = setters(pending);
    std::string section = "general";
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where + "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!table.count(section)) throw ParseError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = table.at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) throw ParseError(where + "unknown key '" + key + "' in [" + section + "]");
        if (key != "point" && !seen.insert(section + "." + key).second)
            throw ParseError(where + "duplicate key '" + key + "'");
        try {
            it->second(cfg, value);
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(where + e.what());
        } catch (const InvalidMollifier& e) {
            throw InvalidMollifier(where + e.what());
        } catch (const ResolutionTooCoarse& e) {
            throw InvalidArgument(where + e.what());
        }
    }
    if (!pending.test4.empty())
        cfg.association.phi4 = test_function(pending.test4, 4, pending.modulation4);
    else
        cfg.association.phi4 = TestFunction(4, cfg.association.phi4.center(), cfg.association.phi4.radius(),
                                            pending.modulation4);
    if (!pending.test3.empty())
        cfg.association.phi3 = test_function(pending.test3, 3, pending.modulation3);
    else
        cfg.association.phi3 = TestFunction(3, cfg.association.phi3.center(), cfg.association.phi3.radius(),
                                            pending.modulation3);
    cfg.association.grid = cfg.grid;
    cfg.association.charge = cfg.charge;
    cfg.association.form = cfg.psi_form;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace lwreg::cli
