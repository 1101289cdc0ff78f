#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f1z/class_polynomial.hpp"
#include "f1z/loose_graph.hpp"

namespace f1z {

// A product of shifted linear factors with integer exponents,
// prod_k (t - k)^{e_k}, encoding a zeta function.  Shifts are kept
// strictly increasing and zero exponents are dropped.
struct ZetaDescriptor {
    std::vector<std::pair<int, int>> factors;  // (shift k, exponent e)

    static ZetaDescriptor of(const std::map<int, int>& by_shift) {
        ZetaDescriptor z;
        for (const auto& [k, e] : by_shift)
            if (e != 0) z.factors.emplace_back(k, e);
        return z;
    }

    bool operator==(const ZetaDescriptor& o) const { return factors == o.factors; }
    bool operator!=(const ZetaDescriptor& o) const { return !(*this == o); }
};

// Zeta of a counting polynomial P = sum a_k L^k: one factor (t-k)^{-a_k}
// per nonzero coefficient.
inline ZetaDescriptor f1_zeta(const ClassPolynomial& p) {
    std::map<int, int> shifts;
    for (const auto& [k, a] : p.coeffs()) {
        if (k < 0) throw std::invalid_argument("negative exponent in class polynomial");
        shifts[k] = static_cast<int>(-a);
    }
    return ZetaDescriptor::of(shifts);
}

// Closed form for a loose tree with at least one vertex:
// (t-1)^I / ( t^{E+I} * prod_k (t-k)^{n_k} ), with n_k the number of
// vertices of degree k > 1, I = (sum n_k) - 1 and E the number of
// degree-1 vertices.  A single isolated vertex (class 1) gives 1/t.
inline ZetaDescriptor tree_zeta(const LooseGraph& g) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    if (g.vertices().size() == 1 && g.degree(g.vertices().front()) == 0)
        return ZetaDescriptor::of({{0, -1}});
    std::map<int, int> shifts;
    int inner_total = 0, e_count = 0;
    for (const auto& v : g.vertices()) {
        int d = g.degree(v);
        if (d == 1) ++e_count;
        else if (d > 1) {
            --shifts[d];
            ++inner_total;
        }
    }
    int i_count = inner_total - 1;
    shifts[1] += i_count;
    shifts[0] -= e_count + i_count;
    return ZetaDescriptor::of(shifts);
}

// Arithmetic zeta shape of an F1-type scheme with counting polynomial
// P = sum a_k L^k: prod_k zeta(s-k)^{a_k}, as (shift, +a_k) factors.
inline ZetaDescriptor arithmetic_zeta(const ClassPolynomial& p) {
    std::map<int, int> shifts;
    for (const auto& [k, a] : p.coeffs()) {
        if (k < 0) throw std::invalid_argument("negative exponent in class polynomial");
        shifts[k] = static_cast<int>(a);
    }
    return ZetaDescriptor::of(shifts);
}

// The counting polynomial a descriptor came from (inverse of f1_zeta).
inline ClassPolynomial class_from_f1(const ZetaDescriptor& z) {
    ClassPolynomial p;
    for (const auto& [k, e] : z.factors) p.set(k, -e);
    return p;
}

namespace detail {

// Render a product of factors; a space separates a factor carrying an
// exponent from the next one ("t^2 (t-2"), plain factors abut ("t(t-1)").
inline std::string render_product(const std::vector<std::pair<std::string, int>>& factors,
                                  bool latex) {
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        bool powered = factors[i].second != 1;
        out += factors[i].first;
        if (powered) {
            out += "^";
            if (latex) out += "{" + std::to_string(factors[i].second) + "}";
            else out += std::to_string(factors[i].second);
        }
        if (i + 1 < factors.size() && powered && !latex) out += " ";
    }
    return out;
}

inline std::string render_fraction(const ZetaDescriptor& z, bool latex,
                                   const std::string& var_zero, const std::string& shifted_open,
                                   const std::string& shifted_close) {
    std::vector<std::pair<std::string, int>> num, den;
    for (const auto& [k, e] : z.factors) {
        std::string base = k == 0 ? var_zero
                                  : shifted_open + std::to_string(k) + shifted_close;
        if (e > 0) num.emplace_back(base, e);
        else den.emplace_back(base, -e);
    }
    if (num.empty() && den.empty()) return "1";
    std::string num_str = num.empty() ? "1" : render_product(num, latex);
    if (den.empty()) return num_str;
    std::string den_str = render_product(den, latex);
    if (latex) {
        if (num.size() == 1 && num[0].second == 1 && num[0].first.front() == '(')
            num_str = num[0].first.substr(1, num[0].first.size() - 2);
        return "\\frac{" + num_str + "}{" + den_str + "}";
    }
    if (den.size() > 1) den_str = "(" + den_str + ")";
    return num_str + "/" + den_str;
}

}  // namespace detail

// Text form in t, e.g. "1/(t(t-1))" or "(t-1)/(t^3 (t-2)^2)".
inline std::string render_f1_zeta(const ZetaDescriptor& z) {
    return detail::render_fraction(z, false, "t", "(t-", ")");
}

// LaTeX fraction, e.g. "\frac{t-1}{t^{3}(t-2)^{2}}".
inline std::string render_f1_zeta_latex(const ZetaDescriptor& z) {
    return detail::render_fraction(z, true, "t", "(t-", ")");
}

// Riemann-zeta product, e.g. "ζ(s)ζ(s-1)ζ(s-2)" or "ζ(s-1)/ζ(s)".
inline std::string render_arithmetic_zeta(const ZetaDescriptor& z) {
    return detail::render_fraction(z, false, "ζ(s)", "ζ(s-", ")");
}

inline std::string render_arithmetic_zeta_latex(const ZetaDescriptor& z) {
    return detail::render_fraction(z, true, "\\zeta(s)", "\\zeta(s-", ")");
}

// JSON shape {"factors": [[k, e], ...]}.
inline std::string zeta_to_json(const ZetaDescriptor& z) {
    std::ostringstream out;
    out << "{\"factors\": [";
    for (std::size_t i = 0; i < z.factors.size(); ++i) {
        if (i) out << ", ";
        out << "[" << z.factors[i].first << ", " << z.factors[i].second << "]";
    }
    out << "]}";
    return out.str();
}

}  // namespace f1z
