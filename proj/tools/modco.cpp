#include <iostream>

#include "modco/io/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modco::run_cli(args, std::cout, std::cerr);
}
