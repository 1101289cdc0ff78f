#include <iostream>
#include <string>
#include <vector>

#include "f1z/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return f1z::run_cli(args, std::cout, std::cerr);
}
