#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "f1z/errors.hpp"
#include "f1z/fp.hpp"
#include "f1z/loose_graph.hpp"

namespace f1z {

inline constexpr std::uint64_t kDefaultBudget = 50'000'000;

// Rational-point model of a loose graph over the ambient projective
// space of its completion.  There is one coordinate per real vertex (in
// id order) followed by one per phantom endpoint (in declaration
// order).  A projective point belongs to the model iff
//   - some real vertex v has p_v != 0 and supp(p) inside
//     {v} union N(v), the closed completion neighborhood of v, or
//   - some free edge with phantom pair {u, w} has p_u != 0, p_w != 0
//     and supp(p) inside {u, w}.
// Membership depends on the support of p only, so the predicate is
// evaluated on coordinate bitmasks.
struct AmbientModel {
    std::vector<std::string> coords;       // labels, reals first
    std::map<std::string, int> index;      // label -> position
    int n_real = 0;
    std::vector<std::uint64_t> vertex_support;  // per real vertex, closed nbhd mask
    std::vector<std::uint64_t> free_pairs;      // two-bit masks

    int dim() const { return static_cast<int>(coords.size()) - 1; }

    bool member_mask(std::uint64_t supp) const {
        for (int v = 0; v < n_real; ++v)
            if ((supp >> v & 1) && (supp & ~vertex_support[v]) == 0) return true;
        for (std::uint64_t pair : free_pairs)
            if (supp == pair) return true;
        return false;
    }
};

inline AmbientModel build_ambient(const LooseGraph& g) {
    AmbientModel m;
    m.coords = g.completion_coords();
    if (m.coords.size() > 64)
        throw std::invalid_argument("ambient space has more than 64 coordinates");
    for (int i = 0; i < static_cast<int>(m.coords.size()); ++i) m.index[m.coords[i]] = i;
    m.n_real = static_cast<int>(g.vertices().size());

    for (int i = 0; i < m.n_real; ++i) {
        const std::string& v = m.coords[i];
        std::uint64_t s = 1ull << i;
        for (const auto& w : g.neighbors(v)) s |= 1ull << m.index.at(w);
        for (const auto& ph : g.phantom_labels_at(v)) s |= 1ull << m.index.at(ph);
        m.vertex_support.push_back(s);
    }
    int free_ordinal = 0;
    for (const auto& d : g.loose_declarations()) {
        if (!d.is_half) {
            std::string base = "~" + std::to_string(free_ordinal++);
            m.free_pairs.push_back((1ull << m.index.at(base + ".0")) |
                                   (1ull << m.index.at(base + ".1")));
        }
    }
    return m;
}

// Closed-neighborhood support of a real vertex, as coordinate labels.
inline std::vector<std::string> support_labels(const AmbientModel& m, const std::string& v) {
    auto it = m.index.find(v);
    if (it == m.index.end() || it->second >= m.n_real)
        throw std::invalid_argument("unknown real vertex '" + v + "'");
    std::vector<std::string> out;
    std::uint64_t s = m.vertex_support[it->second];
    for (std::size_t i = 0; i < m.coords.size(); ++i)
        if (s >> i & 1) out.push_back(m.coords[i]);
    return out;
}

// --- projective points --------------------------------------------------

// A point of PG(n, q) in canonical form: first nonzero coordinate 1.
struct ProjPoint {
    std::int64_t q = 2;
    std::vector<int> coords;

    static ProjPoint make(std::int64_t q, std::vector<int> raw) {
        require_prime(q);
        int lead = -1;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            raw[i] = static_cast<int>(((raw[i] % q) + q) % q);
            if (lead < 0 && raw[i] != 0) lead = static_cast<int>(i);
        }
        if (lead < 0) throw std::invalid_argument("zero vector is not a projective point");
        int inv = fp_inv(raw[lead], static_cast<int>(q));
        for (auto& c : raw) c = fp_mul(c, inv, static_cast<int>(q));
        return {q, std::move(raw)};
    }

    bool operator==(const ProjPoint& o) const { return q == o.q && coords == o.coords; }
};

inline bool member(const AmbientModel& m, const ProjPoint& p) {
    if (p.coords.size() != m.coords.size())
        throw std::invalid_argument("point dimension does not match ambient space");
    std::uint64_t supp = 0;
    for (std::size_t i = 0; i < p.coords.size(); ++i)
        if (p.coords[i] % p.q != 0) supp |= 1ull << i;
    return m.member_mask(supp);
}

// --- enumeration --------------------------------------------------------

namespace detail {

// (q^n - 1) / (q - 1), the number of points of PG(n-1, q).
inline std::uint64_t pg_size(std::int64_t q, int n, std::uint64_t cap) {
    unsigned __int128 total = 0, power = 1;
    for (int i = 0; i < n; ++i) {
        total += power;
        power *= static_cast<unsigned>(q);
        if (total > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(total > cap ? cap + 1 : total);
}

inline std::uint64_t pow_capped(std::int64_t q, int e, std::uint64_t cap) {
    unsigned __int128 p = 1;
    for (int i = 0; i < e; ++i) {
        p *= static_cast<unsigned>(q);
        if (p > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(p);
}

// Visit the support mask of every canonical representative of the
// projective space over the given coordinate positions.  Points are
// visited one by one; the callback sees each point's support mask.
template <class F>
void for_each_point_mask(const std::vector<int>& positions, std::int64_t q, F&& f) {
    int k = static_cast<int>(positions.size());
    std::vector<int> d;
    for (int lead = 0; lead < k; ++lead) {
        int mfree = k - lead - 1;
        d.assign(mfree, 0);
        std::uint64_t mask = 1ull << positions[lead];
        for (;;) {
            f(mask);
            int j = 0;
            while (j < mfree && d[j] == q - 1) {
                d[j] = 0;
                mask &= ~(1ull << positions[lead + 1 + j]);
                ++j;
            }
            if (j == mfree) break;
            if (++d[j] == 1) mask |= 1ull << positions[lead + 1 + j];
        }
    }
}

inline std::vector<int> mask_positions(std::uint64_t mask) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (mask >> i & 1) out.push_back(i);
    return out;
}

}  // namespace detail

// Brute-force point count of the whole model: every canonical point of
// the ambient projective space is enumerated and tested.  This is the
// oracle the symbolic machinery is checked against.
inline std::int64_t count_points(const AmbientModel& m, std::int64_t q,
                                 std::uint64_t budget = kDefaultBudget) {
    require_prime(q);
    int n = static_cast<int>(m.coords.size());
    if (n == 0) return 0;
    std::uint64_t needed = detail::pg_size(q, n, budget);
    if (needed > budget)
        throw BudgetError("point enumeration over the full ambient space", needed);
    std::vector<int> positions(n);
    for (int i = 0; i < n; ++i) positions[i] = i;
    std::int64_t count = 0;
    detail::for_each_point_mask(positions, q, [&](std::uint64_t mask) {
        if (m.member_mask(mask)) ++count;
    });
    return count;
}

// Number of model points whose support lies inside the given window of
// coordinates.  Enumerates each local piece (points with p_v = 1 for a
// real vertex v in the window, or the free pairs) and counts a point at
// its first witnessing piece, so the pieces' overlaps are not double
// counted.  Exact for any window.
inline std::int64_t count_in_subspace(const AmbientModel& m,
                                      const std::vector<std::string>& window,
                                      std::int64_t q,
                                      std::uint64_t budget = kDefaultBudget) {
    require_prime(q);
    std::uint64_t wmask = 0;
    for (const auto& label : window) {
        auto it = m.index.find(label);
        if (it == m.index.end())
            throw std::invalid_argument("unknown coordinate '" + label + "'");
        wmask |= 1ull << it->second;
    }

    struct Piece {
        std::uint64_t constraint;  // supp must lie inside this
        std::uint64_t required;    // these coordinates must be nonzero
        int pivot;                 // coordinate fixed to 1 during enumeration
    };
    std::vector<Piece> pieces;
    std::uint64_t required_budget = 0;
    for (int v = 0; v < m.n_real; ++v) {
        if (!(wmask >> v & 1)) continue;
        std::uint64_t t = m.vertex_support[v] & wmask;
        pieces.push_back({t, 1ull << v, v});
        std::uint64_t c = detail::pow_capped(q, std::popcount(t) - 1, budget);
        required_budget = (c > budget || required_budget + c > budget) ? budget + 1
                                                                       : required_budget + c;
    }
    for (std::uint64_t pair : m.free_pairs) {
        if ((pair & wmask) != pair) continue;
        pieces.push_back({pair, pair, std::countr_zero(pair)});
        if (required_budget + (q - 1) > budget) required_budget = budget + 1;
        else required_budget += q - 1;
    }
    if (required_budget > budget)
        throw BudgetError("windowed point enumeration", required_budget);

    auto earlier_witness = [&](std::size_t i, std::uint64_t mask) {
        for (std::size_t j = 0; j < i; ++j)
            if ((mask & ~pieces[j].constraint) == 0 &&
                (mask & pieces[j].required) == pieces[j].required)
                return true;
        return false;
    };

    std::int64_t count = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const Piece& p = pieces[i];
        auto free_positions = detail::mask_positions(p.constraint & ~(1ull << p.pivot));
        // Enumerate assignments over the non-pivot coordinates; the pivot
        // is 1, so each assignment is a distinct projective point.
        int k = static_cast<int>(free_positions.size());
        std::vector<int> d(k, 0);
        std::uint64_t mask = 1ull << p.pivot;
        for (;;) {
            if ((mask & p.required) == p.required && !earlier_witness(i, mask)) ++count;
            int j = 0;
            while (j < k && d[j] == q - 1) {
                d[j] = 0;
                mask &= ~(1ull << free_positions[j]);
                ++j;
            }
            if (j == k) break;
            if (++d[j] == 1) mask |= 1ull << free_positions[j];
        }
    }
    return count;
}

// Whether the local pieces of two distinct real vertices share a model
// point.  Mirrors adjacency: the pieces meet exactly when the vertices
// are joined by a full edge.
inline bool local_intersection_nonempty(const AmbientModel& m, const std::string& u,
                                        const std::string& v, std::int64_t q) {
    require_prime(q);
    auto iu = m.index.find(u), iv = m.index.find(v);
    if (iu == m.index.end() || iu->second >= m.n_real)
        throw std::invalid_argument("unknown real vertex '" + u + "'");
    if (iv == m.index.end() || iv->second >= m.n_real)
        throw std::invalid_argument("unknown real vertex '" + v + "'");
    if (u == v) throw std::invalid_argument("vertices must be distinct");
    int a = iu->second, b = iv->second;
    std::uint64_t t = m.vertex_support[a] & m.vertex_support[b];
    if (!(t >> a & 1) || !(t >> b & 1)) return false;
    bool found = false;
    detail::for_each_point_mask(detail::mask_positions(t), q, [&](std::uint64_t mask) {
        if (!found && (mask >> a & 1) && (mask >> b & 1) && m.member_mask(mask)) found = true;
    });
    return found;
}

}  // namespace f1z
