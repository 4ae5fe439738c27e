#include "lwreg/errors.hpp"

#include <sstream>

namespace lwreg {

namespace {
std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
} // namespace

NoConvergence::NoConvergence(int iterations, double residual)
    : Error("NoConvergence", "no convergence after " + std::to_string(iterations) +
                                 " iterations, residual " + format_double(residual)),
      iterations_(iterations), residual_(residual) {}

OnWorldline::OnWorldline(double distance)
    : Error("OnWorldline",
            "observer point on the worldline (spatial distance " + format_double(distance) + ")") {}

ResolutionTooCoarse::ResolutionTooCoarse(double spacing, double eps)
    : Error("ResolutionTooCoarse", "quadrature spacing " + format_double(spacing) +
                                       " exceeds eps/8 for eps = " + format_double(eps)) {}

OutOfRange::OutOfRange(double target, double infimum)
    : Error("OutOfRange", "target " + format_double(target) +
                              " below the infimum of the self-energy on (0,1]: " +
                              format_double(infimum)),
      infimum_(infimum) {}

} // namespace lwreg
