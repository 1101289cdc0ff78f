// Prints zeta functions for a few decorated trees.
#include <iostream>

#include "f1z/zeta.hpp"

using namespace f1z;

namespace {
void show(const char* name, const LooseGraph& g) {
    auto z = tree_zeta(g);
    auto cls = tree_class(g);
    std::cout << name << "\n  class: " << cls.to_string()
              << "\n  zeta:  " << render_f1_zeta(z) << "\n  latex: " << render_f1_zeta_latex(z)
              << "\n  arith: " << render_arithmetic_zeta(arithmetic_zeta(cls)) << "\n\n";
}
}  // namespace

int main() {
    LooseGraph path4;
    for (const char* v : {"a", "b", "c", "d"}) path4.add_vertex(v);
    path4.add_full_edge("a", "b");
    path4.add_full_edge("b", "c");
    path4.add_full_edge("c", "d");
    show("path on four vertices", path4);

    LooseGraph star;
    for (const char* v : {"w", "x", "y", "z"}) star.add_vertex(v);
    star.add_full_edge("w", "x");
    star.add_full_edge("w", "y");
    star.add_full_edge("w", "z");
    show("three-pointed star", star);

    LooseGraph horned;  // an edge with a half edge at each end
    horned.add_vertex("a");
    horned.add_vertex("b");
    horned.add_full_edge("a", "b");
    horned.add_half_edge("a");
    horned.add_half_edge("b");
    show("edge with two horns", horned);

    LooseGraph point;
    point.add_vertex("a");
    show("single point", point);
    return 0;
}
