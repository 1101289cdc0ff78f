#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "f1z/ambient.hpp"
#include "f1z/class_polynomial.hpp"
#include "f1z/errors.hpp"
#include "f1z/fp.hpp"
#include "f1z/loose_graph.hpp"

namespace f1z {

// Degree bound for the counting polynomial of a whole graph: each local
// piece is an affine space of dimension degree(v), and a lone free edge
// contributes G_m (degree 1), so the count is a polynomial of degree at
// most the maximum vertex degree (or 1 with free edges present).
inline int class_degree_bound(const LooseGraph& g) {
    int bound = g.free_edge_count() > 0 ? 1 : 0;
    for (const auto& v : g.vertices()) bound = std::max(bound, g.degree(v));
    return bound;
}

// The local projective window of a full edge {x, y}: the coordinates of
// the closed balls around x and y in the completion — both endpoints,
// their real neighbors, and the phantom endpoints of half edges at x
// and y.  Point-count changes under resolving {x, y} are confined to
// this subspace.  Labels come back in ambient coordinate order.
inline std::vector<std::string> local_window(const LooseGraph& g, const std::string& x,
                                             const std::string& y) {
    if (!g.has_full_edge(x, y))
        throw std::invalid_argument("no full edge {" + x + "," + y + "}");
    std::set<std::string> picked{x, y};
    for (const auto& w : g.neighbors(x)) picked.insert(w);
    for (const auto& w : g.neighbors(y)) picked.insert(w);
    for (const auto& ph : g.phantom_labels_at(x)) picked.insert(ph);
    for (const auto& ph : g.phantom_labels_at(y)) picked.insert(ph);
    std::vector<std::string> out;
    for (const auto& label : g.completion_coords())
        if (picked.count(label)) out.push_back(label);
    return out;
}

namespace detail {

// Largest affine dimension of a local piece restricted to the window:
// the windowed counts are integer combinations of powers q^j with
// j <= this bound, so bound+1 samples pin the polynomial.
inline int windowed_degree_bound(const AmbientModel& m, const std::vector<std::string>& window) {
    std::uint64_t wmask = 0;
    for (const auto& label : window) {
        auto it = m.index.find(label);
        if (it == m.index.end())
            throw std::invalid_argument("unknown coordinate '" + label + "'");
        wmask |= 1ull << it->second;
    }
    int bound = 0;
    for (int v = 0; v < m.n_real; ++v) {
        if (!(wmask >> v & 1)) continue;
        bound = std::max(bound, std::popcount(m.vertex_support[v] & wmask) - 1);
    }
    for (std::uint64_t pair : m.free_pairs)
        if ((pair & wmask) == pair) bound = std::max(bound, 1);
    return bound;
}

}  // namespace detail

struct PapResult {
    ClassPolynomial delta;
    std::vector<std::string> window;        // window of the unresolved model
    int degree_bound = 0;                   // max local piece dimension in the window
    std::vector<std::int64_t> primes_used;  // bound+2 sample primes (last = consistency)
};

// Class difference contributed by re-attaching the full edge {x, y}:
//   [G_with] - [G_without] = [G_with | window] - [G_without | window],
// where G_without is G_with with the edge resolved.  Both restrictions
// are counted inside their own ambient spaces over sample primes and
// interpolated exactly; one extra prime guards against a wrong degree
// bound.  The without-window adds the two phantom coordinates created
// by the resolution.
inline PapResult pap_delta_detail(const LooseGraph& g_with, const LooseGraph& g_without,
                                  const std::string& x, const std::string& y,
                                  const std::vector<std::int64_t>& primes = {},
                                  std::uint64_t budget = kDefaultBudget) {
    if (g_without != resolve_edge(g_with, x, y))
        throw std::invalid_argument("second graph is not the first with {" + x + "," + y +
                                    "} resolved");
    PapResult res;
    res.window = local_window(g_with, x, y);
    std::vector<std::string> window_without = res.window;
    window_without.push_back(x + "." + std::to_string(g_with.half_edge_count(x)));
    window_without.push_back(y + "." + std::to_string(g_with.half_edge_count(y)));

    AmbientModel model_with = build_ambient(g_with);
    AmbientModel model_without = build_ambient(g_without);
    res.degree_bound = std::max(detail::windowed_degree_bound(model_with, res.window),
                                detail::windowed_degree_bound(model_without, window_without));

    std::size_t nprimes = static_cast<std::size_t>(res.degree_bound) + 2;
    if (primes.empty()) {
        res.primes_used = smallest_primes(static_cast<int>(nprimes));
    } else {
        if (primes.size() < nprimes)
            throw std::invalid_argument("need at least " + std::to_string(nprimes) +
                                        " sample primes, got " + std::to_string(primes.size()));
        res.primes_used.assign(primes.begin(), primes.begin() + nprimes);
        for (auto p : res.primes_used) require_prime(p);
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> with_samples, without_samples;
    for (auto p : res.primes_used) {
        with_samples.emplace_back(p, count_in_subspace(model_with, res.window, p, budget));
        without_samples.emplace_back(p, count_in_subspace(model_without, window_without, p, budget));
    }
    res.delta = interpolate_class(with_samples, res.degree_bound) -
                interpolate_class(without_samples, res.degree_bound);
    return res;
}

inline ClassPolynomial pap_delta(const LooseGraph& g_with, const LooseGraph& g_without,
                                 const std::string& x, const std::string& y,
                                 const std::vector<std::int64_t>& primes = {},
                                 std::uint64_t budget = kDefaultBudget) {
    return pap_delta_detail(g_with, g_without, x, y, primes, budget).delta;
}

struct SurgeryStep {
    Edge edge;
    std::vector<std::string> window;
    ClassPolynomial before;
    ClassPolynomial after;
    ClassPolynomial delta;
};

struct SurgeryTrace {
    std::vector<SurgeryStep> steps;  // in re-attachment order
    ClassPolynomial final_class;
};

// Surgery with an explicit chord order: resolve the chords left to
// right, take the tree-stage class, then re-attach them right to left,
// adding each local delta.
inline SurgeryTrace surgery_with_chords(const LooseGraph& g, const std::vector<Edge>& chords,
                                        const std::vector<std::int64_t>& primes = {},
                                        std::uint64_t budget = kDefaultBudget) {
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
    SurgeryTrace trace;
    if (g.vertices().empty()) {
        // Connected and vertex-free: the empty graph (class 0) or one free edge.
        if (g.free_edge_count() == 1) trace.final_class = gm_class();
        return trace;
    }

    std::vector<LooseGraph> stages{g};
    for (const auto& e : chords) stages.push_back(resolve_edge(stages.back(), e.first, e.second));
    ClassPolynomial cls = tree_class(stages.back());

    for (int k = static_cast<int>(chords.size()) - 1; k >= 0; --k) {
        PapResult r = pap_delta_detail(stages[k], stages[k + 1], chords[k].first,
                                       chords[k].second, primes, budget);
        SurgeryStep step;
        step.edge = chords[k];
        step.window = std::move(r.window);
        step.before = cls;
        cls += r.delta;
        step.after = cls;
        step.delta = std::move(r.delta);
        trace.steps.push_back(std::move(step));
    }
    trace.final_class = cls;
    return trace;
}

// Deterministic surgery: BFS spanning loose tree, chords in
// lexicographic order.
inline SurgeryTrace surgery_class(const LooseGraph& g,
                                  const std::vector<std::int64_t>& primes = {},
                                  std::uint64_t budget = kDefaultBudget) {
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
    return surgery_with_chords(g, spanning_loose_tree(g).chords, primes, budget);
}

namespace detail {

// All spanning trees of a connected graph, as edge sets (small inputs).
inline std::vector<std::set<Edge>> all_spanning_trees(const LooseGraph& g) {
    std::vector<Edge> edges(g.full_edges().begin(), g.full_edges().end());
    std::size_t n = g.vertices().size(), want = n - 1;
    std::vector<std::set<Edge>> out;
    if (n == 0) return out;
    std::vector<int> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() == want) {
            LooseGraph t;
            for (const auto& v : g.vertices()) t.add_vertex(v);
            for (int i : pick) t.add_full_edge(edges[i].first, edges[i].second);
            if (is_connected(t)) {
                std::set<Edge> s;
                for (int i : pick) s.insert(edges[i]);
                out.push_back(std::move(s));
            }
            return;
        }
        for (std::size_t i = from; i < edges.size(); ++i) {
            pick.push_back(static_cast<int>(i));
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace detail

// Exhaustively confirm that the surgery result does not depend on the
// spanning tree or on the chord order: every spanning tree, every
// permutation of its chords, one identical final polynomial.  The run
// count is capped; exceeding the cap raises BudgetError.
inline bool verify_spanning_tree_independence(const LooseGraph& g,
                                              std::uint64_t max_runs = 100,
                                              std::uint64_t budget = kDefaultBudget) {
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
    if (g.vertices().empty()) return true;
    auto trees = detail::all_spanning_trees(g);
    std::size_t chord_count = g.full_edges().size() - (g.vertices().size() - 1);
    std::uint64_t perms = 1;
    for (std::size_t i = 2; i <= chord_count; ++i) perms *= i;
    std::uint64_t runs = trees.size() * perms;
    if (runs > max_runs)
        throw BudgetError("spanning tree independence sweep", runs);

    bool have_ref = false;
    ClassPolynomial ref;
    for (const auto& tree : trees) {
        std::vector<Edge> chords;
        for (const auto& e : g.full_edges())
            if (!tree.count(e)) chords.push_back(e);
        std::sort(chords.begin(), chords.end());
        do {
            ClassPolynomial got = surgery_with_chords(g, chords, {}, budget).final_class;
            if (!have_ref) {
                ref = got;
                have_ref = true;
            } else if (got != ref) {
                return false;
            }
        } while (std::next_permutation(chords.begin(), chords.end()));
    }
    return true;
}

// --- whole-graph dispatcher --------------------------------------------

struct ComponentClass {
    LooseGraph component;
    ClassPolynomial cls;
};

// Class of each connected component: tree formula when the component is
// a loose tree (or a lone free edge / isolated vertex), surgery
// otherwise.
inline std::vector<ComponentClass> graph_classes(const LooseGraph& g,
                                                 const std::vector<std::int64_t>& primes = {},
                                                 std::uint64_t budget = kDefaultBudget) {
    std::vector<ComponentClass> out;
    for (auto& c : components(g)) {
        ComponentClass cc;
        if (c.vertices().empty()) {
            cc.cls = gm_class();  // a free-edge component
        } else if (is_loose_tree(c)) {
            cc.cls = tree_class(c);
        } else {
            cc.cls = surgery_class(c, primes, budget).final_class;
        }
        cc.component = std::move(c);
        out.push_back(std::move(cc));
    }
    return out;
}

// Total class: sum over components (disjoint-union additivity); the
// empty graph has class 0.
inline ClassPolynomial graph_class(const LooseGraph& g,
                                   const std::vector<std::int64_t>& primes = {},
                                   std::uint64_t budget = kDefaultBudget) {
    ClassPolynomial total;
    for (auto& cc : graph_classes(g, primes, budget)) total += cc.cls;
    return total;
}

}  // namespace f1z
