#pragma once

#include "lwreg/testfunction.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lwreg::dist {

using Rational = boost::rational<std::int64_t>;

/// Mono(n) = t^n, ThetaPlus = theta(t), ThetaMinus = theta(-t),
/// FpPlus(k) = t_+^{-k}, FpMinus(k) = t_-^{-k}, Delta(k) = delta^{(k)}.
/// t_-^{-k} agrees with t^{-k} (not |t|^{-k}) for t < 0. All finite parts
/// are Hadamard's, so that t t_+^{-k-1} = t_+^{-k}.
enum class AtomKind { Mono, ThetaPlus, ThetaMinus, FpPlus, FpMinus, Delta };

struct Atom {
    AtomKind kind = AtomKind::Mono;
    int k = 0;

    static Atom mono(int n) { return {AtomKind::Mono, n}; }
    static Atom theta() { return {AtomKind::ThetaPlus, 0}; }
    static Atom theta_minus() { return {AtomKind::ThetaMinus, 0}; }
    static Atom tplus(int k) { return {AtomKind::FpPlus, k}; }
    static Atom tminus(int k) { return {AtomKind::FpMinus, k}; }
    static Atom delta(int k) { return {AtomKind::Delta, k}; }

    auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& a);

/// Finite linear combination of atoms with rational coefficients, kept
/// canonical: no ThetaMinus (rewritten as 1 - theta) and no zero entries.
class DistExpr {
public:
    DistExpr() = default;
    DistExpr(const Atom& a, Rational c = 1);

    const std::map<Atom, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Atom& a) const;

    DistExpr& operator+=(const DistExpr& o);
    DistExpr& operator-=(const DistExpr& o);
    DistExpr& operator*=(Rational s);

    bool operator==(const DistExpr&) const = default;

    /// Re-canonicalizes; idempotent. Construction already canonicalizes,
    /// so this only matters for expressions built through `raw`.
    DistExpr canonical() const;
    /// Builds an expression from a coefficient map without canonicalizing.
    static DistExpr raw(std::map<Atom, Rational> terms);

private:
    void add(const Atom& a, Rational c);
    std::map<Atom, Rational> terms_;
};

DistExpr operator+(DistExpr a, const DistExpr& b);
DistExpr operator-(DistExpr a, const DistExpr& b);
DistExpr operator*(Rational s, DistExpr a);

constexpr int kDefaultMaxOrder = 8;

/// Linear extension of the derivative table. UnsupportedAtom when an input
/// or output order exceeds `max_order`.
DistExpr differentiate(const DistExpr& u, int max_order = kDefaultMaxOrder);
DistExpr differentiate(const Atom& a, int max_order = kDefaultMaxOrder);

/// Linear extension of the multiply-by-t table. ClosureViolation for
/// t theta(t), which is not in the alphabet.
DistExpr mul_by_t(const DistExpr& u);
DistExpr mul_by_t(const Atom& a);

/// t u' + u.
DistExpr euler_apply(const DistExpr& u, int max_order = kDefaultMaxOrder);

struct EulerSolution {
    int max_delta_order = 0;
    /// Ansatz {t_+^{-1}, t_-^{-1}, delta^{(0..N)}}.
    std::vector<Atom> ansatz;
    DistExpr particular;
    std::vector<DistExpr> homogeneous;
    /// Diagonal of the Euler operator on span{delta^{(k)}}: delta^{(k)} -> -k delta^{(k)}.
    std::vector<Rational> delta_block;
    /// Whether delta_0 lies in the image of the pure-delta block.
    bool delta_block_reaches_delta0 = false;
};

/// Solves t u' + u = delta_0 over the ansatz by exact Gaussian elimination.
EulerSolution solve_euler_delta(int max_delta_order);

/// base + sum_i param_i * terms[i].second, affine in named parameters.
struct AffineDist {
    DistExpr base;
    std::vector<std::pair<std::string, DistExpr>> terms;

    DistExpr at(const std::map<std::string, Rational>& values) const;
};

/// General solution c t_+^{-1} + (c - 1) t_-^{-1} + a0 delta_0.
AffineDist general_solution();

/// t phi for phi = general_solution(), i.e. theta + (c - 1). With
/// `normalize_positive` the value 1 on t > 0 fixes c = 1 and the result is
/// exactly theta.
AffineDist upsilon(bool normalize_positive);

std::string to_string(const DistExpr& u);
/// Inverse of to_string; see README for the grammar.
DistExpr parse(const std::string& text);

/// <a, phi>. Hadamard finite parts are computed as
///   fp int_0^inf phi t^{-k} dt
///     = int_0^inf (phi - T_{k-1} phi 1[t <= 1]) t^{-k} dt
///       - sum_{j <= k-2} phi^{(j)}(0) / (j! (k-1-j)),
/// with the first integral over [0, 1] rewritten through the integral form
/// of the Taylor remainder so no cancellation occurs near 0. Derivatives at
/// 0 come from Taylor jets.
double numeric_pairing(const Atom& a, const Smooth1D& phi);
double numeric_pairing(const DistExpr& u, const Smooth1D& phi);

} // namespace lwreg::dist
