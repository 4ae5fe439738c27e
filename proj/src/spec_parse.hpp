#pragma once

#include <string>
#include <vector>

namespace lwreg::detail {

/// `name` or `name(a, b, ...)` with numeric arguments.
struct CallSpec {
    std::string name;
    std::vector<double> args;
};

CallSpec parse_call(const std::string& text);

/// Strict floating-point parse of a whole token (surrounding blanks allowed).
double parse_number(const std::string& text);

std::string trim(const std::string& s);

} // namespace lwreg::detail
