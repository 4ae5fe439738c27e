#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "lwreg/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"lwreg: regularized Lienard-Wiechert fields and distributional tools"};
    app.require_subcommand(1);

    std::string config_path;
    lwreg::cli::CommandOptions opts;
    std::optional<double> mc2;

    auto add = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto* sub = parent->add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "configuration file");
        return sub;
    };

    add(&app, "kinematics", "retarded kinematics at the observer points (JSON)");
    auto* fields = app.add_subcommand("fields", "field evaluation");
    fields->require_subcommand(1);
    add(fields, "eval", "Phi, Lambda, Psi and Box Phi at the observer points (CSV)");
    add(&app, "associate", "association claims over the epsilon grid (JSON)");
    add(&app, "selfenergy", "self-energy table over the epsilon grid (CSV)");
    auto* renorm = add(&app, "renormalize", "solve U_ele + U_mag = mc2 for eps0 (JSON)");
    renorm->add_option("--mc2", mc2, "target rest energy");
    auto* distalg = app.add_subcommand("distalg", "Euler equation t u' + u = delta");
    distalg->require_subcommand(1);
    auto* solve = distalg->add_subcommand("solve", "particular solution and homogeneous basis");
    solve->add_option("--max-order", opts.max_order, "highest delta derivative in the ansatz");
    auto* verify = distalg->add_subcommand("verify", "apply t d/dt + 1 to an expression");
    verify->add_option("expr", opts.expr, "expression, e.g. 'tplus^-1 - 2*delta^(0)'")->required();
    verify->add_option("--max-order", opts.max_order, "highest supported derivative order");
    add(&app, "check", "run the invariant suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lwreg::cli::kConfigError;
    }

    std::string command;
    for (CLI::App* sub = app.get_subcommands().front();;) {
        command += (command.empty() ? "" : " ") + sub->get_name();
        const auto next = sub->get_subcommands();
        if (next.empty()) break;
        sub = next.front();
    }
    opts.mc2 = mc2;

    try {
        const lwreg::cli::RunConfig cfg =
            config_path.empty() ? lwreg::cli::RunConfig{} : lwreg::cli::load_config(config_path);
        return lwreg::cli::run(command, cfg, opts, std::cout, std::cerr);
    } catch (const lwreg::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return lwreg::cli::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return lwreg::cli::kVerdictFailure;
    }
}
