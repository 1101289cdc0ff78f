// Walks one cyclic graph through surgery and prints every stage.
#include <iostream>

#include "f1z/surgery.hpp"

using namespace f1z;

int main() {
    LooseGraph g;
    for (const char* v : {"a", "b", "c", "d"}) g.add_vertex(v);
    g.add_full_edge("a", "b");
    g.add_full_edge("a", "c");
    g.add_full_edge("b", "c");
    g.add_full_edge("b", "d");
    g.add_full_edge("c", "d");

    std::cout << "input:\n" << serialize_lg(g);

    auto sel = spanning_loose_tree(g);
    std::cout << "\nspanning tree:";
    for (const auto& e : sel.tree_edges) std::cout << " " << e.first << e.second;
    std::cout << "\nchords:";
    for (const auto& e : sel.chords) std::cout << " " << e.first << e.second;
    std::cout << "\n\n";

    auto trace = surgery_class(g);
    for (const auto& step : trace.steps) {
        std::cout << "re-attach " << step.edge.first << step.edge.second << " in window {";
        for (std::size_t i = 0; i < step.window.size(); ++i)
            std::cout << (i ? " " : "") << step.window[i];
        std::cout << "}\n  " << step.before.to_string() << "  +  ("
                  << step.delta.to_string() << ")  =  " << step.after.to_string() << "\n";
    }
    std::cout << "\nclass: " << trace.final_class.to_string() << "\n";
    for (std::int64_t q : {2, 3, 5}) {
        std::cout << "points over F" << q << ": " << trace.final_class.evaluate(q)
                  << " (direct count " << count_points(build_ambient(g), q) << ")\n";
    }
    std::cout << "vertex count from q = 1: " << trace.final_class.evaluate(1) << "\n";
    return 0;
}
