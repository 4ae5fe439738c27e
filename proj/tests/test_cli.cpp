#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "lwreg/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace lwreg;
using namespace lwreg::cli;

namespace {

struct Output {
    int code;
    std::string out;
    std::string err;
};

Output run_text(const std::string& command, const std::string& config, CommandOptions opts = {}) {
    std::ostringstream out, err;
    const int code = run(command, parse_config(config), opts, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        rows.emplace_back();
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) rows.back().push_back(cell);
    }
    return rows;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("empty configuration takes the defaults") {
    const auto cfg = parse_config("");
    CHECK(cfg.worldline.label() == "rest");
    CHECK(cfg.mollifier == "bump");
    CHECK(cfg.grid.size() == 6);
    CHECK(cfg.psi_form == PsiForm::kPrinted);
    CHECK(cfg.observers().empty());
}

TEST_CASE("configuration grammar") {
    const auto cfg = parse_config(R"(# comment
worldline = boost(0.6)
mollifier = boxcar   # trailing comment
epsilon_grid = 0.1, 0.05, 0.025, 0.0125
charge = 2
psi_form = rederived

[observers]
point = 1, 0.5, 0, 0
point = 2, 0, 0.5, 0
random = 3
seed = 9
eps = 0.05

[association]
test4 = bump(0.7, 0.1, 0, 0, 0)
modulation4 = 1, 0.2
tolerance = 2e-3

[quadrature]
polar_nodes = 14

[selfenergy]
mc2 = 250

[output]
csv = out.csv
)");
    CHECK(cfg.worldline.label() == "boost");
    CHECK(cfg.mollifier == "boxcar");
    CHECK(cfg.charge == 2.0);
    CHECK(cfg.psi_form == PsiForm::kRederived);
    CHECK(cfg.observers().size() == 5);
    CHECK(cfg.field_eps() == 0.05);
    CHECK(cfg.association.phi4.radius() == 0.7);
    CHECK(cfg.association.phi4.center()[0] == 0.1);
    CHECK(cfg.association.tolerance == 2e-3);
    CHECK(cfg.association.quad.polar_nodes == 14);
    CHECK(cfg.association.grid.size() == 4);
    CHECK(cfg.association.charge == 2.0);
    CHECK(*cfg.mc2 == 250.0);
    CHECK(cfg.csv_path == "out.csv");
}

TEST_CASE("configuration errors carry the line number") {
    auto kind = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return e.kind() + ": " + e.what();
        }
        return std::string("ok");
    };
    CHECK(kind("epsilon_grid = 1.5").find("InvalidArgument: line 1: epsilon_grid out of (0,1]") == 0);
    CHECK(kind("\n[nope]").find("ParseError: line 2") == 0);
    CHECK(kind("colour = red").find("ParseError") == 0);
    CHECK(kind("charge = 1\ncharge = 2").find("duplicate") != std::string::npos);
    CHECK(kind("worldline = boost(2)").find("InvalidArgument") == 0);
    CHECK(kind("mollifier = gauss").find("ParseError") == 0);
    CHECK(kind("[quadrature]\nshell_spacing = 0.5").find("InvalidArgument: line 2") == 0);
    CHECK(kind("[observers]\npoint = 1, 2").find("ParseError") == 0);
    CHECK(kind("just words").find("ParseError") == 0);
    CHECK(exit_code_for("ParseError") == kConfigError);
    CHECK(exit_code_for("OutOfRange") == kConfigError);
    CHECK(exit_code_for("NoConvergence") == kVerdictFailure);
}

TEST_CASE("selfenergy CSV for the boxcar") {
    const auto o = run_text("selfenergy", "mollifier = boxcar\nepsilon_grid = 0.1, 0.05, 0.025\n");
    CHECK(o.code == kPass);
    const auto rows = csv(o.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"eps", "U_ele", "U_mag", "eps_Uele", "eps3_Umag", "c_eps", "bound",
                                              "pass"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][3]) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rows[i][7] == "1");
    }
}

TEST_CASE("kinematics JSON re-parses under its schema") {
    const auto o = run_text("kinematics", "[observers]\npoint = 5, 3, 0, 0\nrandom = 4\n");
    CHECK(o.code == kPass);
    const auto j = nlohmann::json::parse(o.out);
    REQUIRE(j.size() == 5);
    for (const auto& rec : j) {
        for (const char* key : {"X", "tau_r", "xi", "K", "kappa", "residual"}) CHECK(rec.contains(key));
        CHECK(rec["X"].size() == 4);
        CHECK(rec["K"].size() == 4);
    }
    CHECK(j[0]["tau_r"].get<double>() == 2.0);
    CHECK(j[0]["xi"].get<double>() == 3.0);
}

TEST_CASE("failing observer gives a record and exit 1") {
    const auto o = run_text("kinematics", "[observers]\npoint = 1, 0, 0, 0\npoint = 5, 3, 0, 0\n");
    CHECK(o.code == kVerdictFailure);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j[0]["error"] == "OnWorldline");
    CHECK(o.err.find("error: OnWorldline") == 0);
}

TEST_CASE("fields eval CSV layout and determinism") {
    const std::string cfg = "worldline = circular(0.5, 1)\n[observers]\nrandom = 6\nseed = 4\neps = 0.05\n";
    const auto a = run_text("fields eval", cfg);
    const auto b = run_text("fields eval", cfg);
    CHECK(a.code == kPass);
    CHECK(a.out == b.out);
    const auto rows = csv(a.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].size() == 21);
    CHECK(rows[0][5] == "Phi0");
    CHECK(rows[0][20] == "BoxPhi3");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].size() == 21);
        CHECK(std::stod(rows[i][4]) == 0.05);
    }
}

TEST_CASE("renormalize needs a target") {
    CHECK_THROWS_AS(run_text("renormalize", ""), InvalidArgument);
    CommandOptions opts;
    opts.mc2 = 50.0;
    const auto o = run_text("renormalize", "mollifier = boxcar\n", opts);
    const auto j = nlohmann::json::parse(o.out);
    const double eps0 = j["eps0"];
    CHECK(1 / (2 * eps0) + 1 / (6 * eps0 * eps0 * eps0) == doctest::Approx(50.0).epsilon(1e-10));
    opts.mc2 = 0.1;
    CHECK_THROWS_AS(run_text("renormalize", "mollifier = boxcar\n", opts), OutOfRange);
}

TEST_CASE("distalg subcommands") {
    const auto s = run_text("distalg solve", "");
    CHECK(s.out == "particular: tplus^-1\nhomogeneous: tplus^-1 + tminus^-1\nhomogeneous: delta^(0)\n");
    CommandOptions opts;
    opts.expr = "tplus^-1 + 5*delta^(0)";
    CHECK(run_text("distalg verify", "", opts).out == "delta^(0)\n");
    opts.expr = "theta";
    CHECK(run_text("distalg verify", "", opts).out == "theta\n");
    opts.expr = "tplus^-";
    CHECK_THROWS_AS(run_text("distalg verify", "", opts), ParseError);
}

TEST_CASE("unknown command") { CHECK_THROWS_AS(run_text("plot", ""), InvalidArgument); }

}
