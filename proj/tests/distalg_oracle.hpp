#pragma once

// Distribution pairings without the library's finite-part code.

#include "lwreg/distalg.hpp"
#include "lwreg/testfunction.hpp"
#include "oracles.hpp"

#include <vector>

namespace oracle {

using lwreg::Jet;
using lwreg::Smooth1D;
using lwreg::dist::Atom;
using lwreg::dist::AtomKind;

inline Smooth1D smooth(const PolyGauss& f) {
    return Smooth1D(
        [f](const Jet& t) {
            Jet poly(t.order(), 0.0);
            for (auto it = f.p.rbegin(); it != f.p.rend(); ++it) poly = poly * t + *it;
            const Jet u = (1.0 / f.s) * (t + (-f.c));
            return poly * exp(-0.5 * (u * u));
        },
        f.lo(), f.hi());
}

/// <a, f> computed without the library.
inline double oracle_pairing(const Atom& a, const PolyGauss& f) {
    switch (a.kind) {
    case AtomKind::Mono: {
        PolyGauss g = f;
        for (int i = 0; i < a.k; ++i) g = g.times_t();
        return integrate(g, f.lo(), f.hi());
    }
    case AtomKind::ThetaPlus:
        return finite_part(f, 0);
    case AtomKind::ThetaMinus:
        return finite_part(f.reflected(), 0);
    case AtomKind::FpPlus:
        return finite_part(f, a.k);
    case AtomKind::FpMinus:
        return (a.k % 2 ? -1.0 : 1.0) * finite_part(f.reflected(), a.k);
    case AtomKind::Delta:
        return (a.k % 2 ? -1.0 : 1.0) * f.derivative(a.k)(0.0);
    }
    return 0.0;
}

inline std::vector<Atom> alphabet(int max_k) {
    std::vector<Atom> atoms{Atom::theta(), Atom::theta_minus()};
    for (int k = 0; k <= 3; ++k) atoms.push_back(Atom::mono(k));
    for (int k = 1; k <= max_k; ++k) {
        atoms.push_back(Atom::tplus(k));
        atoms.push_back(Atom::tminus(k));
    }
    for (int k = 0; k <= max_k; ++k) atoms.push_back(Atom::delta(k));
    return atoms;
}

} // namespace oracle
