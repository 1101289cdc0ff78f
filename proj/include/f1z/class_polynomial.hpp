#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f1z/errors.hpp"
#include "f1z/loose_graph.hpp"

namespace f1z {

// Integer polynomial in the Lefschetz class L.  Evaluating at a prime
// power q gives the number of F_q-rational points of the motive it
// represents.  Coefficients are exact integers; only nonzero ones are
// stored.
class ClassPolynomial {
public:
    ClassPolynomial() = default;

    static ClassPolynomial constant(std::int64_t c) {
        ClassPolynomial p;
        p.set(0, c);
        return p;
    }

    static ClassPolynomial lefschetz(int power = 1, std::int64_t coeff = 1) {
        ClassPolynomial p;
        p.set(power, coeff);
        return p;
    }

    void set(int exponent, std::int64_t coeff) {
        if (coeff == 0) coeffs_.erase(exponent);
        else coeffs_[exponent] = coeff;
    }

    std::int64_t coeff(int exponent) const {
        auto it = coeffs_.find(exponent);
        return it == coeffs_.end() ? 0 : it->second;
    }

    const std::map<int, std::int64_t>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    int degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    ClassPolynomial& operator+=(const ClassPolynomial& o) {
        for (const auto& [e, c] : o.coeffs_) set(e, coeff(e) + c);
        return *this;
    }
    ClassPolynomial& operator-=(const ClassPolynomial& o) {
        for (const auto& [e, c] : o.coeffs_) set(e, coeff(e) - c);
        return *this;
    }
    friend ClassPolynomial operator+(ClassPolynomial a, const ClassPolynomial& b) {
        return a += b;
    }
    friend ClassPolynomial operator-(ClassPolynomial a, const ClassPolynomial& b) {
        return a -= b;
    }
    friend ClassPolynomial operator*(const ClassPolynomial& a, const ClassPolynomial& b) {
        ClassPolynomial r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.set(ea + eb, r.coeff(ea + eb) + ca * cb);
        return r;
    }

    bool operator==(const ClassPolynomial& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const ClassPolynomial& o) const { return !(*this == o); }

    std::int64_t evaluate(std::int64_t q) const {
        if (!coeffs_.empty() && coeffs_.begin()->first < 0)
            throw std::invalid_argument("cannot evaluate a negative exponent");
        __int128 acc = 0;
        // Horner over the dense range [0, degree].
        for (int e = degree(); e >= 0; --e) {
            acc = acc * q + coeff(e);
            if (acc > static_cast<__int128>(INT64_MAX) || acc < -static_cast<__int128>(INT64_MAX))
                throw std::overflow_error("class polynomial evaluation overflow");
        }
        return static_cast<std::int64_t>(acc);
    }

    // Human form, e.g. "2L^2 - L + 3"; decreasing exponents.
    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            auto [e, c] = *it;
            if (first) {
                if (c < 0) out << "-";
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            std::int64_t a = c < 0 ? -c : c;
            if (e == 0) out << a;
            else {
                if (a != 1) out << a;
                out << "L";
                if (e != 1) out << "^" << e;
            }
            first = false;
        }
        return out.str();
    }

private:
    std::map<int, std::int64_t> coeffs_;
};

// JSON shape {"coeffs": {"0": c0, "1": c1, ...}}, exponents ascending.
inline std::string class_to_json(const ClassPolynomial& p) {
    std::ostringstream out;
    out << "{\"coeffs\": {";
    bool first = true;
    for (const auto& [e, c] : p.coeffs()) {
        if (!first) out << ", ";
        out << "\"" << e << "\": " << c;
        first = false;
    }
    out << "}}";
    return out.str();
}

// [A^n] = L^n
inline ClassPolynomial affine_class(int n) { return ClassPolynomial::lefschetz(n); }

// [P^n] = L^n + ... + L + 1
inline ClassPolynomial projective_class(int n) {
    ClassPolynomial p;
    for (int e = 0; e <= n; ++e) p.set(e, 1);
    return p;
}

// [G_m] = L - 1, the class of a lone free edge.
inline ClassPolynomial gm_class() {
    ClassPolynomial p;
    p.set(1, 1);
    p.set(0, -1);
    return p;
}

// Class of a connected loose tree, from its degree statistics: with n_d
// vertices of each degree d > 1, I = (sum of n_d) - 1 and E the number
// of degree-1 vertices,
//
//   [T] = sum_d n_d L^d - I L + I + E.
//
// When no vertex has degree > 1 the empty sum leaves I = -1.  A single
// isolated vertex is the one case the formula misses; its class is 1.
inline ClassPolynomial tree_class(const LooseGraph& g) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    std::map<int, std::int64_t> nd;  // degree > 1 -> multiplicity
    std::int64_t e_count = 0, inner_total = 0;
    bool isolated = g.vertices().size() == 1 && g.degree(g.vertices().front()) == 0;
    if (isolated) return ClassPolynomial::constant(1);
    for (const auto& v : g.vertices()) {
        int d = g.degree(v);
        if (d == 1) ++e_count;
        else if (d > 1) {
            ++nd[d];
            ++inner_total;
        }
    }
    std::int64_t i_count = inner_total - 1;
    ClassPolynomial p;
    for (const auto& [d, n] : nd) p.set(d, n);
    p.set(1, p.coeff(1) - i_count);
    p.set(0, p.coeff(0) + i_count + e_count);
    return p;
}

// --- exact interpolation ------------------------------------------------

namespace detail {

// Exact rational arithmetic on top of __int128 with overflow checks.
// Magnitudes stay tiny for the sample counts and prime differences the
// interpolation sees, but any overflow must be loud, never silent.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static __int128 checked_mul(__int128 a, __int128 b) {
        __int128 r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("rational arithmetic overflow");
        return r;
    }

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static Rat of(std::int64_t n, std::int64_t d = 1) {
        Rat r{n, d};
        r.reduce();
        return r;
    }

    Rat operator+(const Rat& o) const {
        Rat r{checked_mul(num, o.den) + checked_mul(o.num, den), checked_mul(den, o.den)};
        r.reduce();
        return r;
    }
    Rat operator*(const Rat& o) const {
        Rat r{checked_mul(num, o.num), checked_mul(den, o.den)};
        r.reduce();
        return r;
    }
    Rat operator-() const { return {-num, den}; }

    bool is_integer() const { return den == 1; }
};

}  // namespace detail

// Reconstruct the unique integer polynomial of degree <= degree_bound
// through the sample points (q_i, count_i).  The first degree_bound + 1
// samples determine the polynomial by Lagrange interpolation over exact
// rationals; all remaining samples are consistency checks and must lie
// on it exactly.  Non-integer coefficients or a failed check raise
// ConsistencyError.
inline ClassPolynomial interpolate_class(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& samples, int degree_bound) {
    if (degree_bound < 0) throw std::invalid_argument("negative degree bound");
    std::size_t needed = static_cast<std::size_t>(degree_bound) + 1;
    if (samples.size() < needed)
        throw std::invalid_argument("insufficient samples: need " + std::to_string(needed) +
                                    ", got " + std::to_string(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (samples[i].first == samples[j].first)
                throw std::invalid_argument("duplicate sample abscissa");

    using detail::Rat;
    std::vector<Rat> poly(needed, Rat::of(0));  // coefficient vector, low to high
    for (std::size_t i = 0; i < needed; ++i) {
        // Lagrange basis polynomial for node i, scaled by the sample value.
        std::vector<Rat> basis{Rat::of(1)};
        Rat scale = Rat::of(samples[i].second);
        for (std::size_t j = 0; j < needed; ++j) {
            if (j == i) continue;
            // multiply basis by (X - q_j) / (q_i - q_j)
            Rat inv_diff = Rat::of(1, samples[i].first - samples[j].first);
            std::vector<Rat> next(basis.size() + 1, Rat::of(0));
            for (std::size_t k = 0; k < basis.size(); ++k) {
                next[k + 1] = next[k + 1] + basis[k] * inv_diff;
                next[k] = next[k] + basis[k] * Rat::of(-samples[j].first) * inv_diff;
            }
            basis = std::move(next);
        }
        for (std::size_t k = 0; k < basis.size(); ++k) poly[k] = poly[k] + basis[k] * scale;
    }

    ClassPolynomial out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (!poly[k].is_integer())
            throw ConsistencyError("interpolated coefficient of L^" + std::to_string(k) +
                                   " is not an integer");
        if (poly[k].num > INT64_MAX || poly[k].num < -static_cast<__int128>(INT64_MAX))
            throw std::overflow_error("interpolated coefficient overflow");
        out.set(static_cast<int>(k), static_cast<std::int64_t>(poly[k].num));
    }
    for (std::size_t i = needed; i < samples.size(); ++i) {
        if (out.evaluate(samples[i].first) != samples[i].second)
            throw ConsistencyError(
                "consistency sample at q=" + std::to_string(samples[i].first) +
                " does not lie on the interpolated polynomial");
    }
    return out;
}

}  // namespace f1z
