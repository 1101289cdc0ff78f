#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "f1z/ambient.hpp"
#include "f1z/errors.hpp"
#include "f1z/fp.hpp"
#include "f1z/loose_graph.hpp"

// Automorphism groups of lifted models at brute-force scale.  The model
// is a union of affine pieces (one per real vertex, one per free edge)
// glued inside a projective space; its symmetries are computed as the
// subgroup of the projective linear group preserving that union over
// every field extension, which is decided coordinate-wise from support
// patterns.  Everything here is deterministic and budgeted.

namespace f1z {

using ProjMatrix = std::vector<std::vector<int>>;  // row-major, entries in [0, q)

struct GroupReport {
    std::int64_t order = 0;
    std::vector<ProjMatrix> generators;  // projective: scaled so the first nonzero entry is 1
    std::vector<std::string> notes;
};

namespace detail {

inline int primitive_root(int q) {
    for (int g = 2; g < q; ++g) {
        int x = g, ord = 1;
        while (x != 1) {
            x = fp_mul(x, g, q);
            ++ord;
        }
        if (ord == q - 1) return g;
    }
    return 1;  // q == 2
}

inline std::vector<int> mat_mul_flat(const std::vector<int>& a, const std::vector<int>& b,
                                     int n, int q) {
    std::vector<int> c(n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            int aik = a[i * n + k];
            if (!aik) continue;
            for (int j = 0; j < n; ++j)
                c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % q;
        }
    return c;
}

inline std::vector<int> identity_flat(int n) {
    std::vector<int> m(n * n, 0);
    for (int i = 0; i < n; ++i) m[i * n + i] = 1;
    return m;
}

// Unique representative of a projective class: first nonzero entry 1.
inline void canonicalize_flat(std::vector<int>& m, int q) {
    for (int v : m)
        if (v) {
            if (v == 1) return;
            int s = fp_inv(v, q);
            for (int& x : m) x = fp_mul(x, s, q);
            return;
        }
}

inline std::vector<int> column_of(const std::vector<int>& flat, int n, int j) {
    std::vector<int> c(n);
    for (int i = 0; i < n; ++i) c[i] = flat[i * n + j];
    return c;
}

inline std::uint64_t vec_support(const std::vector<int>& v) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) s |= 1ull << i;
    return s;
}

inline int encode_vec(const std::vector<int>& v, int q) {
    int e = 0;
    for (std::size_t i = v.size(); i-- > 0;) e = e * q + v[i];
    return e;
}

// Canonical projective points (first nonzero coordinate 1) in a fixed
// deterministic order: leading coordinate ascending, trailing digits in
// odometer order.
inline std::vector<std::vector<int>> proj_point_list(int n, int q) {
    std::vector<std::vector<int>> pts;
    for (int lead = 0; lead < n; ++lead) {
        std::vector<int> v(n, 0);
        v[lead] = 1;
        for (;;) {
            pts.push_back(v);
            int j = lead + 1;
            while (j < n && v[j] == q - 1) v[j++] = 0;
            if (j == n) break;
            ++v[j];
        }
    }
    return pts;
}

// Nullspace basis of a set of row vectors over F_q (length t).
inline std::vector<std::vector<int>> nullspace(std::vector<std::vector<int>> rows, int t,
                                               int q) {
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int col = 0; col < t && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        int inv = fp_inv(rows[rank][col], q);
        for (int j = 0; j < t; ++j) rows[rank][j] = fp_mul(rows[rank][j], inv, q);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            int f = rows[r][col];
            for (int j = 0; j < t; ++j)
                rows[r][j] = fp_sub(rows[r][j], fp_mul(f, rows[rank][j], q), q);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<char> is_pivot(t, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<int>> basis;
    for (int col = 0; col < t; ++col) {
        if (is_pivot[col]) continue;
        std::vector<int> b(t, 0);
        b[col] = 1;
        for (std::size_t r = 0; r < rank; ++r)
            b[pivot_col[r]] = fp_sub(0, rows[r][col], q);
        basis.push_back(std::move(b));
    }
    return basis;
}

struct ModelPiece {
    std::vector<int> positions;  // participating coordinates
    std::vector<int> required;   // coordinates that must be nonzero
};

inline std::vector<ModelPiece> model_pieces(const AmbientModel& m) {
    std::vector<ModelPiece> out;
    for (int v = 0; v < m.n_real; ++v)
        out.push_back({mask_positions(m.vertex_support[v]), {v}});
    for (std::uint64_t pair : m.free_pairs) {
        auto pos = mask_positions(pair);
        out.push_back({pos, pos});
    }
    return out;
}

// Whether the matrix maps every piece of the model into the model over
// every field extension.  Each piece is an affine space; its image
// decomposes into strata by which image coordinates vanish identically,
// and the matrix is admissible iff every realizable stratum has a
// member support pattern.  A stratum cut out by the forms in Z is
// realizable iff its solution space is not contained in any single
// excluded hyperplane (a subspace over an infinite field is never a
// finite union of proper subspaces).
inline bool maps_pieces_inside(const AmbientModel& m, const std::vector<int>& flat, int q) {
    int n = static_cast<int>(m.coords.size());
    for (const ModelPiece& piece : model_pieces(m)) {
        int t = static_cast<int>(piece.positions.size());
        std::vector<std::vector<int>> forms(n, std::vector<int>(t));
        std::vector<int> live;  // rows not identically zero on the piece
        for (int i = 0; i < n; ++i) {
            bool nz = false;
            for (int j = 0; j < t; ++j) {
                forms[i][j] = flat[i * n + piece.positions[j]];
                nz = nz || forms[i][j];
            }
            if (nz) live.push_back(i);
        }
        int s = static_cast<int>(live.size());
        for (std::uint32_t zbits = 0; zbits < (1u << s); ++zbits) {
            std::vector<std::vector<int>> zrows;
            for (int i = 0; i < s; ++i)
                if (zbits >> i & 1) zrows.push_back(forms[live[i]]);
            auto basis = nullspace(std::move(zrows), t, q);
            if (basis.empty()) continue;
            auto escapes = [&](auto value_of) {
                for (const auto& b : basis)
                    if (value_of(b)) return true;
                return false;
            };
            bool realizable = true;
            for (int r : piece.required) {
                int rj = static_cast<int>(std::find(piece.positions.begin(),
                                                    piece.positions.end(), r) -
                                          piece.positions.begin());
                if (!escapes([&](const std::vector<int>& b) { return b[rj] != 0; })) {
                    realizable = false;
                    break;
                }
            }
            for (int i = 0; realizable && i < s; ++i) {
                if (zbits >> i & 1) continue;
                const auto& f = forms[live[i]];
                if (!escapes([&](const std::vector<int>& b) {
                        int acc = 0;
                        for (int j = 0; j < t; ++j) acc = (acc + f[j] * b[j]) % q;
                        return acc != 0;
                    }))
                    realizable = false;
            }
            if (!realizable) continue;
            std::uint64_t img_supp = 0;
            for (int i = 0; i < s; ++i)
                if (!(zbits >> i & 1)) img_supp |= 1ull << live[i];
            if (!m.member_mask(img_supp)) return false;
        }
    }
    return true;
}

// Enumerates the projective matrices that keep the rational member set
// inside itself (hence permute it) and preserve the model's pieces over
// all extensions.  Points whose images are pinned (`fixed`) must map to
// scalar multiples of themselves.  Column 0 is restricted to canonical
// representatives so each projective class appears exactly once.
struct StabilizerSearch {
    const AmbientModel& m;
    int q, n;
    std::vector<std::vector<int>> all_vecs;     // by encoding
    std::vector<std::vector<int>> pts;          // canonical points
    std::vector<char> member, fixed;
    std::vector<std::vector<int>> by_top;       // point ids by top support coord
    std::vector<std::vector<int>> cols;
    std::vector<char> in_span;
    std::vector<int> span_list;
    std::vector<std::vector<int>> elements;

    StabilizerSearch(const AmbientModel& model, std::int64_t qq,
                     const std::set<int>& fixed_point_codes)
        : m(model), q(static_cast<int>(qq)), n(static_cast<int>(model.coords.size())) {
        int total = 1;
        for (int i = 0; i < n; ++i) total *= q;
        all_vecs.assign(total, {});
        for (int e = 0; e < total; ++e) {
            std::vector<int> v(n);
            int x = e;
            for (int i = 0; i < n; ++i) {
                v[i] = x % q;
                x /= q;
            }
            all_vecs[e] = std::move(v);
        }
        pts = proj_point_list(n, q);
        member.resize(pts.size());
        fixed.resize(pts.size());
        by_top.assign(n, {});
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::uint64_t s = vec_support(pts[i]);
            member[i] = m.member_mask(s) ? 1 : 0;
            fixed[i] = fixed_point_codes.count(encode_vec(pts[i], q)) ? 1 : 0;
            by_top[63 - std::countl_zero(s)].push_back(static_cast<int>(i));
        }
        in_span.assign(total, 0);
    }

    bool level_ok(int level) const {
        for (int id : by_top[level]) {
            if (!member[id] && !fixed[id]) continue;
            const auto& c = pts[id];
            std::vector<int> img(n, 0);
            for (int i = 0; i <= level; ++i) {
                if (!c[i]) continue;
                for (int r = 0; r < n; ++r) img[r] = (img[r] + c[i] * cols[i][r]) % q;
            }
            if (fixed[id]) {
                // img must be a scalar multiple of the point itself
                int scalar = 0;
                bool ok = true;
                for (int r = 0; r < n && ok; ++r) {
                    if (c[r] == 0) ok = img[r] == 0;
                    else if (scalar == 0) scalar = fp_mul(img[r], fp_inv(c[r], q), q);
                    else ok = img[r] == fp_mul(scalar, c[r], q);
                }
                if (!ok || scalar == 0) return false;
            } else if (!m.member_mask(vec_support(img))) {
                return false;
            }
        }
        return true;
    }

    void extend_span(const std::vector<int>& c) {
        std::size_t before = span_list.size();
        for (int lam = 1; lam < q; ++lam) {
            std::vector<int> v(n);
            for (int r = 0; r < n; ++r) v[r] = fp_mul(lam, c[r], q);
            int e = encode_vec(v, q);
            if (!in_span[e]) {
                in_span[e] = 1;
                span_list.push_back(e);
            }
        }
        for (std::size_t s = 0; s < before; ++s) {
            const auto& base = all_vecs[span_list[s]];
            for (int lam = 1; lam < q; ++lam) {
                std::vector<int> v(n);
                for (int r = 0; r < n; ++r) v[r] = (base[r] + lam * c[r]) % q;
                int e = encode_vec(v, q);
                if (!in_span[e]) {
                    in_span[e] = 1;
                    span_list.push_back(e);
                }
            }
        }
    }

    void rollback_span(std::size_t mark) {
        while (span_list.size() > mark) {
            in_span[span_list.back()] = 0;
            span_list.pop_back();
        }
    }

    void dfs(int level) {
        if (level == n) {
            std::vector<int> flat(n * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) flat[i * n + j] = cols[j][i];
            if (maps_pieces_inside(m, flat, q)) {
                canonicalize_flat(flat, q);  // shared representative convention
                elements.push_back(std::move(flat));
            }
            return;
        }
        if (level == 0) {
            for (const auto& p : pts) {
                cols.push_back(p);
                if (level_ok(0)) {
                    std::size_t mark = span_list.size();
                    if (n > 1) extend_span(p);
                    dfs(1);
                    rollback_span(mark);
                }
                cols.pop_back();
            }
            return;
        }
        for (std::size_t e = 1; e < all_vecs.size(); ++e) {
            if (in_span[e]) continue;
            cols.push_back(all_vecs[e]);
            if (level_ok(level)) {
                std::size_t mark = span_list.size();
                if (level + 1 < n) extend_span(all_vecs[e]);
                dfs(level + 1);
                rollback_span(mark);
            }
            cols.pop_back();
        }
    }

    std::vector<std::vector<int>> run() {
        if (n == 0) return {};
        dfs(0);
        std::sort(elements.begin(), elements.end());
        return elements;
    }
};

inline std::vector<std::vector<int>> closure_of(std::vector<std::vector<int>> gens, int n,
                                                int q, std::uint64_t cap) {
    std::set<std::vector<int>> seen;
    seen.insert(identity_flat(n));
    std::vector<std::vector<int>> frontier{identity_flat(n)};
    for (auto& g : gens) canonicalize_flat(g, q);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& f : frontier)
            for (const auto& g : gens) {
                auto p = mat_mul_flat(f, g, n, q);
                canonicalize_flat(p, q);
                if (seen.insert(p).second) {
                    if (seen.size() > cap)
                        throw BudgetError("group closure enumeration", seen.size());
                    next.push_back(std::move(p));
                }
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

inline std::vector<std::vector<int>> greedy_generators(
    const std::vector<std::vector<int>>& elements, int n, int q) {
    std::vector<std::vector<int>> gens;
    std::set<std::vector<int>> closed;
    closed.insert(identity_flat(n));
    for (const auto& e : elements) {
        if (closed.count(e)) continue;
        gens.push_back(e);
        auto cl = closure_of(gens, n, q, elements.size());
        closed = {cl.begin(), cl.end()};
    }
    return gens;
}

inline ProjMatrix unflatten(const std::vector<int>& f, int n) {
    ProjMatrix m(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = f[i * n + j];
    return m;
}

inline std::vector<int> flatten(const ProjMatrix& m) {
    std::vector<int> f;
    for (const auto& row : m) f.insert(f.end(), row.begin(), row.end());
    return f;
}

inline std::int64_t full_projective_order(int n, std::int64_t q) {
    std::int64_t qn = 1;
    for (int i = 0; i < n; ++i) qn *= q;
    std::int64_t order = 1, qi = 1;
    for (int i = 0; i < n; ++i) {
        order *= qn - qi;
        qi *= q;
    }
    return order / (q - 1);
}

inline void require_search_budget(int n, std::int64_t q, std::uint64_t budget) {
    std::uint64_t needed = pow_capped(q, n * n, budget);
    if (needed > budget) throw BudgetError("projective stabilizer search", needed);
}

}  // namespace detail

// Setwise stabilizer of the model inside the projective linear group of
// its ambient space.  Preservation is required over every field
// extension, which the piece-stratum test decides exactly.
inline GroupReport projective_stabilizer(const AmbientModel& m, std::int64_t q,
                                         std::uint64_t budget = kDefaultBudget) {
    require_prime(q);
    int n = static_cast<int>(m.coords.size());
    if (n == 0) return {1, {}, {"empty ambient space"}};
    detail::require_search_budget(n, q, budget);

    bool everything = true;
    for (std::uint64_t mask = 1; everything && mask < (1ull << n); ++mask)
        everything = m.member_mask(mask);
    if (everything) {
        GroupReport r;
        r.order = detail::full_projective_order(n, q);
        r.notes.push_back("model fills the ambient space; full projective linear group");
        if (n > 1) {
            ProjMatrix cyc(n, std::vector<int>(n, 0));
            for (int i = 0; i < n; ++i) cyc[i][(i + 1) % n] = 1;
            ProjMatrix trans = detail::unflatten(detail::identity_flat(n), n);
            trans[0][1] = 1;
            r.generators.push_back(cyc);
            r.generators.push_back(trans);
            if (q > 2) {
                ProjMatrix diag = detail::unflatten(detail::identity_flat(n), n);
                diag[0][0] = detail::primitive_root(static_cast<int>(q));
                r.generators.push_back(diag);
            }
        }
        return r;
    }

    detail::StabilizerSearch search(m, q, {});
    auto elements = search.run();
    GroupReport r;
    r.order = static_cast<std::int64_t>(elements.size());
    for (const auto& g : detail::greedy_generators(elements, n, static_cast<int>(q)))
        r.generators.push_back(detail::unflatten(g, n));
    r.notes.push_back("rational model points: " +
                      std::to_string(std::count(search.member.begin(),
                                                search.member.end(), 1)));
    r.notes.push_back("preservation enforced over every field extension");
    return r;
}

// Subgroup of the stabilizer that fixes, pointwise, the rational model
// points supported away from w: for every real vertex v != w, all
// member points with p_v != 0 supported inside v's closed neighborhood
// with w removed, together with w's own coordinate point and all free
// edge points.
inline GroupReport local_stabilizer(const AmbientModel& m, const std::string& w,
                                    std::int64_t q, std::uint64_t budget = kDefaultBudget) {
    require_prime(q);
    auto it = m.index.find(w);
    if (it == m.index.end() || it->second >= m.n_real)
        throw std::invalid_argument("unknown real vertex '" + w + "'");
    int widx = it->second;
    int n = static_cast<int>(m.coords.size());
    detail::require_search_budget(n, q, budget);

    std::set<int> fixed_codes;
    auto pts = detail::proj_point_list(n, static_cast<int>(q));
    int qint = static_cast<int>(q);
    for (const auto& p : pts) {
        std::uint64_t supp = detail::vec_support(p);
        bool fix = supp == (1ull << widx);
        for (int v = 0; !fix && v < m.n_real; ++v) {
            if (v == widx) continue;
            std::uint64_t allowed = m.vertex_support[v] & ~(1ull << widx);
            fix = (supp >> v & 1) && (supp & ~allowed) == 0;
        }
        for (std::uint64_t pair : m.free_pairs)
            if (supp == pair) fix = true;
        if (fix) fixed_codes.insert(detail::encode_vec(p, qint));
    }

    detail::StabilizerSearch search(m, q, fixed_codes);
    auto elements = search.run();
    GroupReport r;
    r.order = static_cast<std::int64_t>(elements.size());
    for (const auto& g : detail::greedy_generators(elements, n, qint))
        r.generators.push_back(detail::unflatten(g, n));
    r.notes.push_back("pointwise-fixed rational points: " +
                      std::to_string(fixed_codes.size()));
    return r;
}

// Ordinary tree induced on the inner (degree >= 2) vertices.
inline LooseGraph inner_tree(const LooseGraph& g) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    auto bi = boundary_and_inner(g);
    if (bi.inner.empty()) throw std::invalid_argument("no inner vertices");
    LooseGraph t;
    for (const auto& v : bi.inner) t.add_vertex(v);
    std::set<std::string> inner(bi.inner.begin(), bi.inner.end());
    for (const auto& e : g.full_edges())
        if (inner.count(e.first) && inner.count(e.second)) t.add_full_edge(e.first, e.second);
    return t;
}

struct TreeAut {
    std::int64_t order = 1;
    std::vector<std::map<std::string, std::string>> generators;  // vertex permutations
};

namespace detail {

struct TreeAutBuilder {
    const LooseGraph& g;
    std::map<std::string, std::vector<std::string>> adj;
    std::map<std::pair<std::string, std::string>, std::string> enc_memo;
    TreeAut result;

    explicit TreeAutBuilder(const LooseGraph& graph) : g(graph) {
        for (const auto& v : g.vertices()) adj[v] = {};
        for (const auto& e : g.full_edges()) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
    }

    std::string enc(const std::string& v, const std::string& parent) {
        auto key = std::make_pair(v, parent);
        auto it = enc_memo.find(key);
        if (it != enc_memo.end()) return it->second;
        std::vector<std::string> childs;
        for (const auto& u : adj[v])
            if (u != parent) childs.push_back(enc(u, v));
        std::sort(childs.begin(), childs.end());
        std::string s = "(" + std::to_string(g.half_edge_count(v));
        for (const auto& c : childs) s += c;
        s += ")";
        enc_memo[key] = s;
        return s;
    }

    void traversal(const std::string& v, const std::string& parent,
                   std::vector<std::string>& out) {
        out.push_back(v);
        std::vector<std::pair<std::string, std::string>> childs;  // (enc, id)
        for (const auto& u : adj[v])
            if (u != parent) childs.push_back({enc(u, v), u});
        std::sort(childs.begin(), childs.end());
        for (const auto& [e, u] : childs) traversal(u, v, out);
    }

    std::map<std::string, std::string> swap_perm(const std::string& a, const std::string& pa,
                                                 const std::string& b,
                                                 const std::string& pb) {
        std::vector<std::string> ta, tb;
        traversal(a, pa, ta);
        traversal(b, pb, tb);
        std::map<std::string, std::string> perm;
        for (const auto& v : g.vertices()) perm[v] = v;
        for (std::size_t i = 0; i < ta.size(); ++i) {
            perm[ta[i]] = tb[i];
            perm[tb[i]] = ta[i];
        }
        return perm;
    }

    void process(const std::string& v, const std::string& parent) {
        std::vector<std::pair<std::string, std::string>> childs;
        for (const auto& u : adj[v])
            if (u != parent) childs.push_back({enc(u, v), u});
        std::sort(childs.begin(), childs.end());
        for (std::size_t i = 0; i < childs.size();) {
            std::size_t j = i;
            while (j < childs.size() && childs[j].first == childs[i].first) ++j;
            for (std::size_t k = i + 1; k < j; ++k) {
                result.order *= static_cast<std::int64_t>(k - i + 1);
                result.generators.push_back(
                    swap_perm(childs[k - 1].second, v, childs[k].second, v));
            }
            i = j;
        }
        for (const auto& [e, u] : childs) process(u, v);
    }
};

}  // namespace detail

// Automorphisms of a loose tree: vertex permutations preserving edges
// and half-edge counts (half edges at a common vertex are
// interchangeable and induce no extra permutations).
inline TreeAut tree_automorphisms(const LooseGraph& g) {
    if (g.vertices().empty() || !is_loose_tree(g))
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    detail::TreeAutBuilder b(g);

    // Centers by iterated leaf stripping on the real tree.
    std::map<std::string, int> deg;
    std::vector<std::string> layer;
    int remaining = static_cast<int>(g.vertices().size());
    for (const auto& v : g.vertices()) {
        deg[v] = static_cast<int>(b.adj[v].size());
        if (deg[v] <= 1) layer.push_back(v);
    }
    while (remaining > 2) {
        std::vector<std::string> next;
        remaining -= static_cast<int>(layer.size());
        for (const auto& v : layer)
            for (const auto& u : b.adj[v])
                if (--deg[u] == 1) next.push_back(u);
        layer = std::move(next);
    }

    std::sort(layer.begin(), layer.end());
    if (layer.size() == 1) {
        b.process(layer[0], "");
    } else {
        const std::string &c1 = layer[0], &c2 = layer[1];
        b.process(c1, c2);
        b.process(c2, c1);
        if (b.enc(c1, c2) == b.enc(c2, c1)) {
            b.result.order *= 2;
            b.result.generators.push_back(b.swap_perm(c1, c2, c2, c1));
        }
    }
    return b.result;
}

inline std::int64_t tree_aut_order(const LooseGraph& g) { return tree_automorphisms(g).order; }

struct InnerVertexProfile {
    bool sole_inner = false;  // every edge at w ends in the boundary
    int end_edges = 0;        // full edges to degree-1 vertices
    int loose_edges = 0;      // half edges at w
    int inner_edges = 0;      // full edges to other inner vertices
};

inline InnerVertexProfile inner_vertex_profile(const LooseGraph& g, const std::string& w) {
    if (!g.has_vertex(w)) throw std::invalid_argument("unknown vertex '" + w + "'");
    if (g.degree(w) < 2) throw std::invalid_argument("'" + w + "' is not an inner vertex");
    InnerVertexProfile p;
    p.loose_edges = g.half_edge_count(w);
    int inner_count = 0;
    for (const auto& v : g.vertices())
        if (g.degree(v) >= 2) ++inner_count;
    p.sole_inner = inner_count == 1;
    for (const auto& u : g.neighbors(w))
        (g.degree(u) >= 2 ? p.inner_edges : p.end_edges) += 1;
    return p;
}

namespace detail {

inline std::vector<std::vector<int>> stab_elements(const AmbientModel& m, std::int64_t q,
                                                   std::uint64_t budget,
                                                   const std::set<int>& fixed_codes) {
    int n = static_cast<int>(m.coords.size());
    require_search_budget(n, q, budget);
    StabilizerSearch search(m, q, fixed_codes);
    return search.run();
}

// All vertex permutations generated by the tree automorphism report.
inline std::vector<std::map<std::string, std::string>> tree_aut_elements(
    const LooseGraph& t) {
    auto aut = tree_automorphisms(t);
    std::map<std::string, std::string> id;
    for (const auto& v : t.vertices()) id[v] = v;
    std::set<std::map<std::string, std::string>> seen{id};
    std::vector<std::map<std::string, std::string>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::map<std::string, std::string>> next;
        for (const auto& f : frontier)
            for (const auto& g : aut.generators) {
                std::map<std::string, std::string> c;
                for (const auto& [v, fv] : f) c[v] = g.at(fv);
                if (seen.insert(c).second) next.push_back(std::move(c));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace detail

// Checks that the stabilizer is generated by its local factors: the
// pointwise-local subgroups at every inner vertex, the coordinate
// permutations induced by automorphisms of the inner tree (those whose
// decorations allow an extension), and per-coordinate rescalings.
inline bool decomposition_check(const LooseGraph& g, std::int64_t q,
                                std::uint64_t budget = kDefaultBudget) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    auto bi = boundary_and_inner(g);
    if (bi.inner.size() < 2)
        throw std::invalid_argument("need at least two inner vertices");
    auto m = build_ambient(g);
    int n = static_cast<int>(m.coords.size());
    int qint = static_cast<int>(q);

    auto full = detail::stab_elements(m, q, budget, {});

    std::vector<std::vector<int>> gens;
    for (const auto& w : bi.inner) {
        auto rep = local_stabilizer(m, w, q, budget);
        for (const auto& gmat : rep.generators) gens.push_back(detail::flatten(gmat));
    }

    std::set<std::string> inner_set(bi.inner.begin(), bi.inner.end());
    std::map<std::string, std::vector<std::string>> leaves;  // inner -> boundary neighbors
    for (const auto& v : bi.inner) {
        for (const auto& u : g.neighbors(v))
            if (!inner_set.count(u)) leaves[v].push_back(u);
        std::sort(leaves[v].begin(), leaves[v].end());
    }
    for (const auto& sigma : detail::tree_aut_elements(inner_tree(g))) {
        bool extendable = true;
        for (const auto& [v, sv] : sigma) {
            if (leaves[v].size() != leaves[sv].size() ||
                g.half_edge_count(v) != g.half_edge_count(sv)) {
                extendable = false;
                break;
            }
        }
        if (!extendable) continue;
        std::map<std::string, std::string> coord_map;
        for (const auto& [v, sv] : sigma) {
            coord_map[v] = sv;
            for (std::size_t i = 0; i < leaves[v].size(); ++i)
                coord_map[leaves[v][i]] = leaves.at(sv)[i];
            for (int h = 0; h < g.half_edge_count(v); ++h)
                coord_map[v + "." + std::to_string(h)] = sv + "." + std::to_string(h);
        }
        std::vector<int> flat(n * n, 0);
        for (int j = 0; j < n; ++j) {
            int i = m.index.at(coord_map.at(m.coords[j]));
            flat[i * n + j] = 1;
        }
        gens.push_back(std::move(flat));
    }

    if (q > 2) {
        int r = detail::primitive_root(qint);
        for (int i = 0; i < n; ++i) {
            auto d = detail::identity_flat(n);
            d[i * n + i] = r;
            gens.push_back(std::move(d));
        }
    }

    auto generated = detail::closure_of(gens, n, qint, full.size());
    std::sort(generated.begin(), generated.end());
    return generated == full;
}

// Checks that every stabilizer element maps the inner vertex points
// onto themselves and permutes the rational point sets of the lines
// spanned by inner edges.
inline bool inner_tree_stability_check(const LooseGraph& g, std::int64_t q,
                                       std::uint64_t budget = kDefaultBudget) {
    if (!is_loose_tree(g) || g.vertices().empty())
        throw std::invalid_argument("input is not a loose tree with at least one vertex");
    auto bi = boundary_and_inner(g);
    if (bi.inner.size() < 2)
        throw std::invalid_argument("need at least two inner vertices");
    auto m = build_ambient(g);
    int n = static_cast<int>(m.coords.size());
    int qint = static_cast<int>(q);

    auto canon_code = [&](std::vector<int> v) {
        int lead = 0;
        while (!v[lead]) ++lead;
        int inv = fp_inv(v[lead], qint);
        for (int& x : v) x = fp_mul(x, inv, qint);
        return detail::encode_vec(v, qint);
    };
    std::set<int> inner_codes;
    for (const auto& w : bi.inner) {
        std::vector<int> e(n, 0);
        e[m.index.at(w)] = 1;
        inner_codes.insert(canon_code(e));
    }
    std::set<std::string> inner_set(bi.inner.begin(), bi.inner.end());
    std::set<std::vector<int>> line_sets;
    std::vector<std::pair<int, int>> inner_edges;
    for (const auto& e : g.full_edges()) {
        if (!inner_set.count(e.first) || !inner_set.count(e.second)) continue;
        int a = m.index.at(e.first), b = m.index.at(e.second);
        inner_edges.push_back({a, b});
        std::vector<int> codes;
        for (int lam = 0; lam <= qint; ++lam) {
            std::vector<int> p(n, 0);
            if (lam == qint) p[b] = 1;
            else {
                p[a] = 1;
                p[b] = lam;
            }
            codes.push_back(canon_code(p));
        }
        std::sort(codes.begin(), codes.end());
        line_sets.insert(codes);
    }

    for (const auto& flat : detail::stab_elements(m, q, budget, {})) {
        auto apply = [&](const std::vector<int>& v) {
            std::vector<int> img(n, 0);
            for (int j = 0; j < n; ++j) {
                if (!v[j]) continue;
                for (int i = 0; i < n; ++i) img[i] = (img[i] + v[j] * flat[i * n + j]) % qint;
            }
            return img;
        };
        for (const auto& w : bi.inner) {
            std::vector<int> e(n, 0);
            e[m.index.at(w)] = 1;
            if (!inner_codes.count(canon_code(apply(e)))) return false;
        }
        for (const auto& [a, b] : inner_edges) {
            std::vector<int> codes;
            for (int lam = 0; lam <= qint; ++lam) {
                std::vector<int> p(n, 0);
                if (lam == qint) p[b] = 1;
                else {
                    p[a] = 1;
                    p[b] = lam;
                }
                codes.push_back(canon_code(apply(p)));
            }
            std::sort(codes.begin(), codes.end());
            if (!line_sets.count(codes)) return false;
        }
    }
    return true;
}

struct IncLine {
    std::vector<int> points;  // indices into IncidenceGeometry::points
    bool projective = false;  // else: complete affine (one point short)
};

struct IncidenceGeometry {
    std::vector<ProjPoint> points;  // the rational model points
    std::vector<IncLine> lines;
};

// Point-line geometry of the model: points are the rational model
// points; lines are the ambient lines lying inside the model over every
// extension, either entirely (projective) or up to exactly one rational
// point (complete affine).  A line's generic point has the union
// support of any two spanning points, so the extension condition is a
// support mask test.
inline IncidenceGeometry incidence_geometry(const AmbientModel& m, std::int64_t q,
                                            std::uint64_t budget = kDefaultBudget) {
    require_prime(q);
    int n = static_cast<int>(m.coords.size());
    int qint = static_cast<int>(q);
    IncidenceGeometry geom;
    if (n == 0) return geom;

    auto pts = detail::proj_point_list(n, qint);
    std::map<int, int> member_index;  // encoding -> index in geom.points
    std::vector<std::vector<int>> member_vecs;
    for (const auto& p : pts) {
        if (!m.member_mask(detail::vec_support(p))) continue;
        member_index[detail::encode_vec(p, qint)] = static_cast<int>(geom.points.size());
        std::vector<int> copy = p;
        geom.points.push_back(ProjPoint::make(q, copy));
        member_vecs.push_back(p);
    }
    std::uint64_t cost = static_cast<std::uint64_t>(member_vecs.size()) *
                         member_vecs.size() * qint;
    if (cost > budget) throw BudgetError("incidence line enumeration", cost);

    auto canon_code = [&](std::vector<int> v) {
        int lead = 0;
        while (!v[lead]) ++lead;
        int inv = fp_inv(v[lead], qint);
        for (int& x : v) x = fp_mul(x, inv, qint);
        return detail::encode_vec(v, qint);
    };

    std::set<std::vector<int>> seen_lines;  // keyed by all rational point codes
    for (std::size_t i = 0; i < member_vecs.size(); ++i)
        for (std::size_t j = i + 1; j < member_vecs.size(); ++j) {
            std::vector<int> codes;
            codes.push_back(detail::encode_vec(member_vecs[i], qint));
            codes.push_back(detail::encode_vec(member_vecs[j], qint));
            for (int lam = 1; lam < qint; ++lam) {
                std::vector<int> v(n);
                for (int r = 0; r < n; ++r)
                    v[r] = (member_vecs[i][r] + lam * member_vecs[j][r]) % qint;
                codes.push_back(canon_code(v));
            }
            std::sort(codes.begin(), codes.end());
            if (!seen_lines.insert(codes).second) continue;
            std::uint64_t generic = detail::vec_support(member_vecs[i]) |
                                    detail::vec_support(member_vecs[j]);
            if (!m.member_mask(generic)) continue;
            IncLine line;
            int missing = 0;
            for (int code : codes) {
                auto it = member_index.find(code);
                if (it == member_index.end()) ++missing;
                else line.points.push_back(it->second);
            }
            if (missing > 1) continue;
            line.projective = missing == 0;
            std::sort(line.points.begin(), line.points.end());
            geom.lines.push_back(std::move(line));
        }
    return geom;
}

// Exact order of the incidence-preserving permutation group of the
// geometry's points: bijections mapping lines to lines of the same
// size.  Backtracking over points with pair-collinearity invariants.
inline std::int64_t comb_aut_order(const IncidenceGeometry& geom,
                                   std::uint64_t budget = kDefaultBudget) {
    int n = static_cast<int>(geom.points.size());
    if (n == 0) return 1;
    // pair type: 0 none, 1 projective, 2 affine
    std::vector<std::vector<char>> ptype(n, std::vector<char>(n, 0));
    std::set<std::pair<bool, std::vector<int>>> line_keys;
    for (const auto& l : geom.lines) {
        line_keys.insert({l.projective, l.points});
        char t = l.projective ? 1 : 2;
        for (std::size_t a = 0; a < l.points.size(); ++a)
            for (std::size_t b = a + 1; b < l.points.size(); ++b)
                ptype[l.points[a]][l.points[b]] = ptype[l.points[b]][l.points[a]] = t;
    }
    std::vector<std::pair<int, int>> color(n, {0, 0});
    for (const auto& l : geom.lines)
        for (int p : l.points) (l.projective ? color[p].first : color[p].second) += 1;

    std::vector<int> image(n, -1);
    std::vector<char> used(n, 0);
    std::uint64_t nodes = 0;
    std::int64_t count = 0;

    auto lines_ok = [&]() {
        for (const auto& l : geom.lines) {
            std::vector<int> img;
            for (int p : l.points) img.push_back(image[p]);
            std::sort(img.begin(), img.end());
            if (!line_keys.count({l.projective, img})) return false;
        }
        return true;
    };

    std::function<void(int)> assign = [&](int i) {
        if (++nodes > budget) throw BudgetError("incidence automorphism search", nodes);
        if (i == n) {
            if (lines_ok()) ++count;
            return;
        }
        for (int c = 0; c < n; ++c) {
            if (used[c] || color[c] != color[i]) continue;
            bool ok = true;
            for (int j = 0; ok && j < i; ++j)
                ok = ptype[image[j]][c] == ptype[j][i];
            if (!ok) continue;
            image[i] = c;
            used[c] = 1;
            assign(i + 1);
            used[c] = 0;
            image[i] = -1;
        }
    };
    assign(0);
    return count;
}

inline std::string group_to_json(const GroupReport& r) {
    std::ostringstream out;
    out << "{\"order\": " << r.order << ", \"generators\": [";
    for (std::size_t g = 0; g < r.generators.size(); ++g) {
        if (g) out << ", ";
        out << "[";
        for (std::size_t i = 0; i < r.generators[g].size(); ++i) {
            if (i) out << ", ";
            out << "[";
            for (std::size_t j = 0; j < r.generators[g][i].size(); ++j) {
                if (j) out << ", ";
                out << r.generators[g][i][j];
            }
            out << "]";
        }
        out << "]";
    }
    out << "], \"notes\": [";
    for (std::size_t i = 0; i < r.notes.size(); ++i) {
        if (i) out << ", ";
        out << "\"" << r.notes[i] << "\"";
    }
    out << "]}";
    return out.str();
}

}  // namespace f1z
