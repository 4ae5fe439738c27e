#pragma once

#include <stdexcept>
#include <string>

namespace lwreg {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class NoConvergence : public Error {
public:
    NoConvergence(int iterations, double residual);
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// Observer point (numerically) on the worldline itself; every retarded
/// quantity divides by the retarded distance there.
class OnWorldline : public Error {
public:
    explicit OnWorldline(double distance);
};

/// The backward light cone of the observer never meets the worldline
/// (e.g. behind the horizon of uniformly accelerated motion).
class NoRetardedSolution : public Error {
public:
    explicit NoRetardedSolution(const std::string& why)
        : Error("NoRetardedSolution", why) {}
};

class InvalidMollifier : public Error {
public:
    explicit InvalidMollifier(const std::string& why) : Error("InvalidMollifier", why) {}
};

class SmoothnessRequired : public Error {
public:
    explicit SmoothnessRequired(const std::string& why)
        : Error("SmoothnessRequired", why) {}
};

class DegenerateNet : public Error {
public:
    explicit DegenerateNet(const std::string& why) : Error("DegenerateNet", why) {}
};

class ResolutionTooCoarse : public Error {
public:
    ResolutionTooCoarse(double spacing, double eps);
};

class OutOfRange : public Error {
public:
    OutOfRange(double target, double infimum);
    double infimum() const noexcept { return infimum_; }

private:
    double infimum_;
};

class UnsupportedAtom : public Error {
public:
    explicit UnsupportedAtom(const std::string& why) : Error("UnsupportedAtom", why) {}
};

class ClosureViolation : public Error {
public:
    explicit ClosureViolation(const std::string& why) : Error("ClosureViolation", why) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& why) : Error("ParseError", why) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& why) : Error("InvalidArgument", why) {}
};

} // namespace lwreg
