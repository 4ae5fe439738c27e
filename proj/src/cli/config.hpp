#pragma once

#include "lwreg/association.hpp"
#include "lwreg/fields.hpp"
#include "lwreg/minkowski.hpp"
#include "lwreg/regularization.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lwreg::cli {

/// Parsed configuration file. Every field has a default, so an empty file
/// is a valid configuration.
struct RunConfig {
    std::string worldline_spec = "rest";
    Worldline worldline = Worldline::rest();
    std::string mollifier = "bump";
    EpsilonGrid grid = EpsilonGrid::geometric(0.1, 0.5, 6);
    double charge = 1.0;
    double moment = 1.0;
    PsiForm psi_form = PsiForm::kPrinted;

    // [observers]
    std::vector<FourVector> points;
    int random_points = 0;
    std::uint64_t seed = 1;
    double extent = 2.0;
    std::optional<double> eps;

    // [association] and [quadrature]
    AssociationConfig association;

    // [selfenergy]
    std::optional<double> mc2;
    double scaling_tol = 1e-8;
    double renormalize_tol = 1e-10;

    // [output]
    std::string csv_path;
    std::string json_path;

    /// Explicit points followed by the seeded random cloud.
    std::vector<FourVector> observers() const;
    /// `eps` if given, otherwise the first grid value.
    double field_eps() const;
};

/// Line-oriented `key = value` grammar with `[section]` headers and `#`
/// comments; see README. Throws ParseError or InvalidArgument with the line
/// number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace lwreg::cli
