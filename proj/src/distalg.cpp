#include "lwreg/distalg.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/quadrature.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace lwreg::dist {

namespace {

void validate(const Atom& a) {
    switch (a.kind) {
    case AtomKind::Mono:
    case AtomKind::Delta:
        if (a.k < 0) throw InvalidArgument("negative order in " + to_string(a));
        break;
    case AtomKind::FpPlus:
    case AtomKind::FpMinus:
        if (a.k < 1) throw InvalidArgument("finite part needs k >= 1");
        break;
    default:
        break;
    }
}

bool has_order(const Atom& a) {
    return a.kind == AtomKind::FpPlus || a.kind == AtomKind::FpMinus || a.kind == AtomKind::Delta;
}

void check_order(const Atom& a, int max_order) {
    if (has_order(a) && a.k > max_order)
        throw UnsupportedAtom(to_string(a) + " exceeds maximum order " + std::to_string(max_order));
}

Rational factorial(int k) {
    std::int64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rational(f);
}

Rational sign_pow(int k) { return k % 2 == 0 ? Rational(1) : Rational(-1); }

std::string rational_string(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

} // namespace

std::string to_string(const Atom& a) {
    switch (a.kind) {
    case AtomKind::Mono:
        return a.k == 0 ? "1" : a.k == 1 ? "t" : "t^" + std::to_string(a.k);
    case AtomKind::ThetaPlus:
        return "theta";
    case AtomKind::ThetaMinus:
        return "theta(-t)";
    case AtomKind::FpPlus:
        return "tplus^-" + std::to_string(a.k);
    case AtomKind::FpMinus:
        return "tminus^-" + std::to_string(a.k);
    case AtomKind::Delta:
        return "delta^(" + std::to_string(a.k) + ")";
    }
    return "?";
}

DistExpr::DistExpr(const Atom& a, Rational c) { add(a, c); }

void DistExpr::add(const Atom& a, Rational c) {
    validate(a);
    if (c.numerator() == 0) return;
    if (a.kind == AtomKind::ThetaMinus) {
        add(Atom::mono(0), c);
        add(Atom::theta(), -c);
        return;
    }
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
        it->second += c;
        if (it->second.numerator() == 0) terms_.erase(it);
    }
}

Rational DistExpr::coefficient(const Atom& a) const {
    const auto it = terms_.find(a);
    return it == terms_.end() ? Rational(0) : it->second;
}

DistExpr& DistExpr::operator+=(const DistExpr& o) {
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
}

DistExpr& DistExpr::operator-=(const DistExpr& o) {
    for (const auto& [a, c] : o.terms_) add(a, -c);
    return *this;
}

DistExpr& DistExpr::operator*=(Rational s) {
    if (s.numerator() == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
}

DistExpr DistExpr::canonical() const {
    DistExpr out;
    for (const auto& [a, c] : terms_) out.add(a, c);
    return out;
}

DistExpr DistExpr::raw(std::map<Atom, Rational> terms) {
    DistExpr out;
    out.terms_ = std::move(terms);
    return out;
}

DistExpr operator+(DistExpr a, const DistExpr& b) { return a += b; }
DistExpr operator-(DistExpr a, const DistExpr& b) { return a -= b; }
DistExpr operator*(Rational s, DistExpr a) { return a *= s; }

DistExpr differentiate(const Atom& a, int max_order) {
    validate(a);
    check_order(a, max_order);
    DistExpr out;
    switch (a.kind) {
    case AtomKind::Mono:
        if (a.k > 0) out = DistExpr(Atom::mono(a.k - 1), a.k);
        break;
    case AtomKind::ThetaPlus:
        out = DistExpr(Atom::delta(0));
        break;
    case AtomKind::ThetaMinus:
        out = DistExpr(Atom::delta(0), -1);
        break;
    case AtomKind::FpPlus:
        // (t_+^{-k})' = -k t_+^{-k-1} + (-1)^k delta^{(k)} / k!
        out = DistExpr(Atom::tplus(a.k + 1), -a.k) +
              DistExpr(Atom::delta(a.k), sign_pow(a.k) / factorial(a.k));
        break;
    case AtomKind::FpMinus:
        // (t_-^{-k})' = -k t_-^{-k-1} - (-1)^k delta^{(k)} / k!
        out = DistExpr(Atom::tminus(a.k + 1), -a.k) +
              DistExpr(Atom::delta(a.k), -sign_pow(a.k) / factorial(a.k));
        break;
    case AtomKind::Delta:
        out = DistExpr(Atom::delta(a.k + 1));
        break;
    }
    for (const auto& [b, c] : out.terms()) check_order(b, max_order);
    return out;
}

DistExpr differentiate(const DistExpr& u, int max_order) {
    DistExpr out;
    for (const auto& [a, c] : u.terms()) out += c * differentiate(a, max_order);
    return out;
}

DistExpr mul_by_t(const Atom& a) {
    validate(a);
    switch (a.kind) {
    case AtomKind::Mono:
        return DistExpr(Atom::mono(a.k + 1));
    case AtomKind::ThetaPlus:
    case AtomKind::ThetaMinus:
        throw ClosureViolation("t * " + to_string(a) + " is not in the atom alphabet");
    case AtomKind::FpPlus:
        return a.k == 1 ? DistExpr(Atom::theta()) : DistExpr(Atom::tplus(a.k - 1));
    case AtomKind::FpMinus:
        return a.k == 1 ? DistExpr(Atom::theta_minus()) : DistExpr(Atom::tminus(a.k - 1));
    case AtomKind::Delta:
        return a.k == 0 ? DistExpr() : DistExpr(Atom::delta(a.k - 1), -a.k);
    }
    return {};
}

DistExpr mul_by_t(const DistExpr& u) {
    DistExpr out;
    for (const auto& [a, c] : u.terms()) out += c * mul_by_t(a);
    return out;
}

DistExpr euler_apply(const DistExpr& u, int max_order) {
    return mul_by_t(differentiate(u, max_order)) + u;
}

EulerSolution solve_euler_delta(int max_delta_order) {
    if (max_delta_order < 0) throw InvalidArgument("max delta order must be >= 0");
    EulerSolution sol;
    sol.max_delta_order = max_delta_order;
    sol.ansatz = {Atom::tplus(1), Atom::tminus(1)};
    for (int k = 0; k <= max_delta_order; ++k) sol.ansatz.push_back(Atom::delta(k));
    // Differentiating delta^{(N)} produces delta^{(N+1)}.
    const int order = std::max(kDefaultMaxOrder, max_delta_order + 1);

    std::vector<DistExpr> images;
    std::map<Atom, std::size_t> row_of;
    for (const Atom& a : sol.ansatz) {
        images.push_back(euler_apply(DistExpr(a), order));
        for (const auto& [b, c] : images.back().terms()) row_of.try_emplace(b, 0);
    }
    row_of.try_emplace(Atom::delta(0), 0);
    std::size_t r = 0;
    for (auto& [b, idx] : row_of) idx = r++;

    const std::size_t rows = row_of.size();
    const std::size_t cols = sol.ansatz.size();
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1, Rational(0)));
    for (std::size_t j = 0; j < cols; ++j)
        for (const auto& [b, c] : images[j].terms()) m[row_of[b]][j] = c;
    m[row_of[Atom::delta(0)]][cols] = 1;

    // Reduced row echelon form.
    std::vector<int> pivot_col;
    std::size_t prow = 0;
    for (std::size_t j = 0; j < cols && prow < rows; ++j) {
        std::size_t p = prow;
        while (p < rows && m[p][j].numerator() == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[prow]);
        const Rational inv = Rational(1) / m[prow][j];
        for (auto& v : m[prow]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == prow || m[i][j].numerator() == 0) continue;
            const Rational f = m[i][j];
            for (std::size_t q = 0; q <= cols; ++q) m[i][q] -= f * m[prow][q];
        }
        pivot_col.push_back(static_cast<int>(j));
        ++prow;
    }
    for (std::size_t i = prow; i < rows; ++i)
        if (m[i][cols].numerator() != 0) throw ClosureViolation("Euler equation has no solution over the ansatz");

    std::vector<bool> is_pivot(cols, false);
    for (int j : pivot_col) is_pivot[j] = true;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        sol.particular += DistExpr(sol.ansatz[pivot_col[i]], m[i][cols]);
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        DistExpr v(sol.ansatz[f]);
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v += DistExpr(sol.ansatz[pivot_col[i]], -m[i][f]);
        sol.homogeneous.push_back(v);
    }

    // The pure-delta block is diagonal; delta_0 is in its image iff some
    // column has a nonzero delta_0 entry.
    for (int k = 0; k <= max_delta_order; ++k) {
        const DistExpr img = euler_apply(DistExpr(Atom::delta(k)), order);
        sol.delta_block.push_back(img.coefficient(Atom::delta(k)));
        if (img.coefficient(Atom::delta(0)).numerator() != 0) sol.delta_block_reaches_delta0 = true;
    }
    return sol;
}

DistExpr AffineDist::at(const std::map<std::string, Rational>& values) const {
    DistExpr out = base;
    for (const auto& [name, e] : terms) {
        const auto it = values.find(name);
        if (it == values.end()) throw InvalidArgument("no value for parameter " + name);
        out += it->second * e;
    }
    return out;
}

AffineDist general_solution() {
    AffineDist phi;
    phi.base = DistExpr(Atom::tminus(1), -1);
    phi.terms.emplace_back("c", DistExpr(Atom::tplus(1)) + DistExpr(Atom::tminus(1)));
    phi.terms.emplace_back("a0", DistExpr(Atom::delta(0)));
    return phi;
}

AffineDist upsilon(bool normalize_positive) {
    const AffineDist phi = general_solution();
    AffineDist u;
    u.base = mul_by_t(phi.base);
    for (const auto& [name, e] : phi.terms) u.terms.emplace_back(name, mul_by_t(e));
    if (!normalize_positive) return u;
    // On t > 0 only theta and the constant contribute; requiring the value 1
    // there fixes c.
    auto value_on_positive = [](const DistExpr& e) {
        return e.coefficient(Atom::theta()) + e.coefficient(Atom::mono(0));
    };
    Rational fixed_c = 0;
    for (const auto& [name, e] : u.terms) {
        if (name != "c") continue;
        const Rational slope = value_on_positive(e);
        fixed_c = (Rational(1) - value_on_positive(u.base)) / slope;
    }
    std::map<std::string, Rational> values{{"c", fixed_c}, {"a0", 0}};
    AffineDist normalized;
    normalized.base = u.at(values);
    // a0 drops out of t phi entirely; keep it as a (null) parameter.
    for (const auto& [name, e] : u.terms)
        if (name != "c") normalized.terms.emplace_back(name, e);
    return normalized;
}

std::string to_string(const DistExpr& u) {
    if (u.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [a, c] : u.terms()) {
        const bool negative = c.numerator() < 0;
        const Rational mag = negative ? -c : c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        if (a == Atom::mono(0))
            out += rational_string(mag);
        else if (mag == Rational(1))
            out += to_string(a);
        else
            out += rational_string(mag) + "*" + to_string(a);
    }
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    DistExpr parse() {
        DistExpr out;
        skip();
        bool negative = false;
        if (peek() == '+' || peek() == '-') negative = get() == '-';
        out += signed_term(negative);
        while (true) {
            skip();
            if (pos_ == s_.size()) break;
            const char op = get();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            out += signed_term(op == '-');
        }
        return out;
    }

private:
    DistExpr signed_term(bool negative) {
        DistExpr t = term();
        if (negative) t *= Rational(-1);
        return t;
    }

    DistExpr term() {
        skip();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            const Rational c = rational();
            skip();
            if (peek() == '*') {
                ++pos_;
                return DistExpr(atom(), c);
            }
            return DistExpr(Atom::mono(0), c);
        }
        return DistExpr(atom());
    }

    Rational rational() {
        const std::int64_t n = integer();
        skip();
        if (peek() == '/') {
            ++pos_;
            skip();
            const std::int64_t d = integer();
            if (d == 0) fail("zero denominator");
            return Rational(n, d);
        }
        return Rational(n);
    }

    std::int64_t integer() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected an integer");
        try {
            return std::stoll(s_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail("integer out of range");
        }
        return 0;
    }

    Atom atom() {
        skip();
        if (accept("tplus^-")) return Atom::tplus(static_cast<int>(integer()));
        if (accept("tminus^-")) return Atom::tminus(static_cast<int>(integer()));
        if (accept("theta")) {
            if (accept("(-t)")) return Atom::theta_minus();
            return Atom::theta();
        }
        if (accept("delta")) {
            if (accept("^(")) {
                const int k = static_cast<int>(integer());
                if (!accept(")")) fail("expected ')'");
                return Atom::delta(k);
            }
            return Atom::delta(0);
        }
        if (accept("t")) {
            if (accept("^")) return Atom::mono(static_cast<int>(integer()));
            return Atom::mono(1);
        }
        if (accept("1")) return Atom::mono(0);
        fail("expected an atom");
        return {};
    }

    bool accept(const std::string& word) {
        if (s_.compare(pos_, word.size(), word) != 0) return false;
        pos_ += word.size();
        return true;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

// fp int_0^inf phi t^{-k} dt.
double hadamard_plus(const Smooth1D& phi, int k) {
    if (phi.hi() <= 0.0) return 0.0;
    const std::vector<double> c = phi.taylor(0.0, static_cast<std::size_t>(k));
    double kfact = 1.0;
    for (int i = 2; i < k; ++i) kfact *= i;
    // int_0^1 (phi - T_{k-1}) t^{-k} dt
    //   = 1/(k-1)! int_0^1 dt int_0^1 (1-u)^{k-1} phi^{(k)}(u t) du.
    const double near = quad::adaptive(
        [&](double t) {
            return quad::adaptive(
                [&](double u) {
                    return std::pow(1.0 - u, k - 1) * phi.derivative_at(u * t, static_cast<std::size_t>(k));
                },
                0.0, 1.0, 1e-14, 1e-12);
        },
        0.0, 1.0, 1e-13, 1e-12) / kfact;
    double far = 0.0;
    if (phi.hi() > 1.0)
        far = quad::adaptive([&](double t) { return phi(t) * std::pow(t, -k); }, 1.0, phi.hi(), 1e-14,
                             1e-12);
    double correction = 0.0;
    for (int j = 0; j <= k - 2; ++j) correction += c[j] / (k - 1 - j);
    return near + far - correction;
}

} // namespace

DistExpr parse(const std::string& text) {
    try {
        return Parser(text).parse();
    } catch (const InvalidArgument& e) {
        // Syntactically fine but out of the alphabet, e.g. tplus^-0.
        throw ParseError(std::string(e.what()) + " in '" + text + "'");
    }
}

double numeric_pairing(const Atom& a, const Smooth1D& phi) {
    validate(a);
    const double lo = phi.lo();
    const double hi = phi.hi();
    auto integrate = [&](const std::function<double(double)>& f, double a0, double b0) {
        if (!(b0 > a0)) return 0.0;
        return quad::adaptive(f, a0, b0, 1e-14, 1e-12);
    };
    switch (a.kind) {
    case AtomKind::Mono:
        return integrate([&](double t) { return std::pow(t, a.k) * phi(t); }, lo, hi);
    case AtomKind::ThetaPlus:
        return integrate([&](double t) { return phi(t); }, std::max(0.0, lo), hi);
    case AtomKind::ThetaMinus:
        return integrate([&](double t) { return phi(t); }, lo, std::min(0.0, hi));
    case AtomKind::FpPlus:
        return hadamard_plus(phi, a.k);
    case AtomKind::FpMinus:
        // t^{-k} = (-1)^k s^{-k} under t = -s.
        return (a.k % 2 == 0 ? 1.0 : -1.0) * hadamard_plus(phi.reflected(), a.k);
    case AtomKind::Delta:
        return (a.k % 2 == 0 ? 1.0 : -1.0) * phi.derivative_at(0.0, static_cast<std::size_t>(a.k));
    }
    return 0.0;
}

double numeric_pairing(const DistExpr& u, const Smooth1D& phi) {
    double s = 0.0;
    for (const auto& [a, c] : u.terms())
        s += boost::rational_cast<double>(c) * numeric_pairing(a, phi);
    return s;
}

} // namespace lwreg::dist
