#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "f1z/ambient.hpp"
#include "f1z/autgroups.hpp"
#include "f1z/class_polynomial.hpp"
#include "f1z/errors.hpp"
#include "f1z/fp.hpp"
#include "f1z/loose_graph.hpp"
#include "f1z/surgery.hpp"
#include "f1z/zeta.hpp"

namespace f1z {

// Parsed command line.  `primes` empty means the smallest primes are
// chosen where sampling is needed.
struct CliConfig {
    std::string command;
    std::string input_path;
    std::vector<std::int64_t> primes;
    std::int64_t q = 2;
    std::uint64_t budget = kDefaultBudget;
    bool json = false;
    bool trace = false;
    bool latex = false;
};

namespace detail {

inline std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::string json_string_array(const std::vector<std::string>& parts) {
    std::string out = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + parts[i] + "\"";
    }
    return out + "]";
}

inline std::string describe_component(const LooseGraph& c) {
    if (c.vertices().empty()) return "free edge";
    return "vertices " + join(c.vertices(), " ");
}

inline void cmd_class(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    auto parts = graph_classes(g, cfg.primes, cfg.budget);
    ClassPolynomial total;
    for (const auto& cc : parts) total += cc.cls;
    if (cfg.json) {
        out << "{\"components\": [";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out << ", ";
            out << "{\"vertices\": " << json_string_array(parts[i].component.vertices())
                << ", \"class\": " << class_to_json(parts[i].cls) << "}";
        }
        out << "], \"total\": " << class_to_json(total) << "}\n";
        return;
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        out << "component " << i + 1 << " (" << describe_component(parts[i].component)
            << "): " << parts[i].cls.to_string() << "\n";
    out << "total: " << total.to_string() << "\n";
}

inline void cmd_zeta(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    ZetaDescriptor z = f1_zeta(graph_class(g, cfg.primes, cfg.budget));
    if (cfg.json) out << zeta_to_json(z) << "\n";
    else if (cfg.latex) out << render_f1_zeta_latex(z) << "\n";
    else out << render_f1_zeta(z) << "\n";
}

inline void cmd_count(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    std::int64_t n = graph_class(g, cfg.primes, cfg.budget).evaluate(cfg.q);
    if (cfg.json) out << "{\"q\": " << cfg.q << ", \"count\": " << n << "}\n";
    else out << n << "\n";
}

inline void cmd_surgery(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    SurgeryTrace tr = surgery_class(g, cfg.primes, cfg.budget);
    if (cfg.json) {
        out << "{";
        if (cfg.trace) {
            out << "\"steps\": [";
            for (std::size_t i = 0; i < tr.steps.size(); ++i) {
                const auto& s = tr.steps[i];
                if (i) out << ", ";
                out << "{\"edge\": [\"" << s.edge.first << "\", \"" << s.edge.second
                    << "\"], \"window\": " << json_string_array(s.window)
                    << ", \"delta\": " << class_to_json(s.delta) << "}";
            }
            out << "], ";
        }
        out << "\"class\": " << class_to_json(tr.final_class) << "}\n";
        return;
    }
    if (cfg.trace)
        for (std::size_t i = 0; i < tr.steps.size(); ++i) {
            const auto& s = tr.steps[i];
            out << "step " << i + 1 << ": edge {" << s.edge.first << "," << s.edge.second
                << "}, window [" << join(s.window, " ") << "], delta "
                << s.delta.to_string() << "\n";
        }
    out << "class: " << tr.final_class.to_string() << "\n";
}

inline void cmd_verify(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    AmbientModel m = build_ambient(g);
    std::vector<std::int64_t> primes = cfg.primes;
    if (primes.empty()) primes = smallest_primes(class_degree_bound(g) + 2);
    ClassPolynomial total = graph_class(g, cfg.primes, cfg.budget);
    for (auto p : primes)
        if (count_points(m, p, cfg.budget) != total.evaluate(p))
            throw ConsistencyError("point count disagrees with the class polynomial at q = " +
                                   std::to_string(p));

    int edges = 0;
    for (const auto& e : g.full_edges()) {
        LooseGraph res = resolve_edge(g, e.first, e.second);
        ClassPolynomial global_delta = total - graph_class(res, cfg.primes, cfg.budget);
        ClassPolynomial local_delta =
            pap_delta(g, res, e.first, e.second, cfg.primes, cfg.budget);
        if (global_delta != local_delta)
            throw ConsistencyError("window delta disagrees with the global delta at edge {" +
                                   e.first + "," + e.second + "}");
        ++edges;
    }

    std::string indep = "vacuous (no chords)";
    for (auto& c : components(g)) {
        if (c.vertices().empty() || is_loose_tree(c)) continue;
        if (!verify_spanning_tree_independence(c, 100, cfg.budget))
            throw ConsistencyError(
                "surgery result depends on the spanning tree or chord order");
        indep = "pass";
    }

    std::vector<std::string> prime_strs;
    for (auto p : primes) prime_strs.push_back(std::to_string(p));
    if (cfg.json) {
        out << "{\"oracle_equality\": {\"status\": \"pass\", \"primes\": ["
            << join(prime_strs, ", ") << "]}, "
            << "\"edge_locality\": {\"status\": \"pass\", \"edges\": " << edges << "}, "
            << "\"spanning_tree_independence\": {\"status\": \"" << indep << "\"}}\n";
        return;
    }
    out << "oracle equality: pass (primes " << join(prime_strs, ", ") << ")\n";
    out << "edge locality: pass (" << edges << " edges)\n";
    out << "spanning tree independence: " << indep << "\n";
}

inline void cmd_aut(const LooseGraph& g, const CliConfig& cfg, std::ostream& out) {
    AmbientModel m = build_ambient(g);
    GroupReport rep = projective_stabilizer(m, cfg.q, cfg.budget);
    bool tree = !g.vertices().empty() && is_loose_tree(g);
    if (!tree) {
        if (cfg.json) {
            out << "{\"stabilizer\": " << group_to_json(rep)
                << ", \"structural_check\": \"skipped (input is not a loose tree)\"}\n";
        } else {
            out << "projective stabilizer order: " << rep.order << "\n";
            for (const auto& note : rep.notes) out << "note: " << note << "\n";
            out << "structural check: skipped (input is not a loose tree)\n";
        }
        return;
    }

    TreeAut aut = tree_automorphisms(g);
    auto bi = boundary_and_inner(g);
    struct LocalRow {
        std::string v;
        std::int64_t order;
        InnerVertexProfile profile;
    };
    std::vector<LocalRow> rows;
    for (const auto& w : bi.inner)
        rows.push_back({w, local_stabilizer(m, w, cfg.q, cfg.budget).order,
                        inner_vertex_profile(g, w)});

    std::string decomp, action;
    if (bi.inner.empty()) {
        decomp = action = "skipped (no inner vertices)";
    } else if (bi.inner.size() == 1) {
        decomp = action = "skipped (single inner vertex)";
    } else {
        if (!decomposition_check(g, cfg.q, cfg.budget))
            throw ConsistencyError("local stabilizers fail to generate the full group");
        decomp = "verified";
        if (!inner_tree_stability_check(g, cfg.q, cfg.budget))
            throw ConsistencyError("inner points or lines are not preserved");
        action = "preserved";
    }

    if (cfg.json) {
        out << "{\"stabilizer\": " << group_to_json(rep)
            << ", \"tree_symmetries\": " << aut.order << ", \"local\": [";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) out << ", ";
            out << "{\"vertex\": \"" << rows[i].v << "\", \"order\": " << rows[i].order
                << ", \"end_edges\": " << rows[i].profile.end_edges
                << ", \"loose_edges\": " << rows[i].profile.loose_edges
                << ", \"inner_edges\": " << rows[i].profile.inner_edges << "}";
        }
        out << "], \"decomposition\": \"" << decomp << "\", \"inner_action\": \""
            << action << "\"}\n";
        return;
    }
    out << "projective stabilizer order: " << rep.order << "\n";
    for (const auto& note : rep.notes) out << "note: " << note << "\n";
    out << "tree symmetries: " << aut.order << "\n";
    out << "inner vertices: " << rows.size() << "\n";
    for (const auto& r : rows)
        out << "S(" << r.v << "): order " << r.order << " (" << r.profile.end_edges
            << " end, " << r.profile.loose_edges << " loose, " << r.profile.inner_edges
            << " inner edges)\n";
    out << "decomposition: " << decomp << "\n";
    if (rows.size() >= 2) out << "inner tree action: " << action << "\n";
}

}  // namespace detail

// Parse arguments (program name excluded) and run one command, writing
// results to `out` and diagnostics to `err`.  Returns the process exit
// code: 0 success, 2 bad input, 3 budget refusal, 4 consistency failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"loose graphs, their point models, class polynomials, zeta functions, "
                 "and symmetry groups"};
    app.name("f1z");
    app.require_subcommand(1);

    struct SubDesc {
        const char* name;
        const char* help;
    };
    const SubDesc subs[] = {
        {"class", "class polynomial per component, plus the total"},
        {"zeta", "zeta function of the total class"},
        {"count", "number of model points over a given field size"},
        {"surgery", "re-attachment pipeline for a connected graph"},
        {"verify", "cross-check counts, window deltas, and spanning tree choice"},
        {"aut", "symmetry groups and structure checks"},
    };
    for (const auto& sd : subs) {
        CLI::App* sub = app.add_subcommand(sd.name, sd.help);
        sub->add_option("file", cfg.input_path, "input .lg file")->required();
        sub->add_option("--q", cfg.q, "field size for count/aut (default 2)");
        sub->add_option("--primes", cfg.primes, "sample primes, comma separated")
            ->delimiter(',');
        sub->add_option("--budget", cfg.budget, "enumeration budget");
        sub->add_flag("--json", cfg.json, "machine readable output");
        sub->add_flag("--trace", cfg.trace, "per-step surgery trace");
        sub->add_flag("--latex", cfg.latex, "LaTeX rendering where applicable");
    }

    std::vector<std::string> full{"f1z"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : full) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    for (const auto& sd : subs)
        if (app.get_subcommand(sd.name)->parsed()) cfg.command = sd.name;

    if (cfg.budget == 0) {
        err << "error: budget must be positive\n";
        return 2;
    }
    if (cfg.q < 1) {
        err << "error: q must be at least 1\n";
        return 2;
    }

    try {
        for (std::size_t i = 0; i < cfg.primes.size(); ++i) {
            require_prime(cfg.primes[i]);
            if (i > 0 && cfg.primes[i] <= cfg.primes[i - 1])
                throw std::invalid_argument("primes must be distinct and increasing");
        }
        LooseGraph g = parse_lg(detail::slurp_file(cfg.input_path));
        if (cfg.command == "class") detail::cmd_class(g, cfg, out);
        else if (cfg.command == "zeta") detail::cmd_zeta(g, cfg, out);
        else if (cfg.command == "count") detail::cmd_count(g, cfg, out);
        else if (cfg.command == "surgery") detail::cmd_surgery(g, cfg, out);
        else if (cfg.command == "verify") detail::cmd_verify(g, cfg, out);
        else if (cfg.command == "aut") detail::cmd_aut(g, cfg, out);
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ConsistencyError& e) {
        err << "consistency failure: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace f1z
