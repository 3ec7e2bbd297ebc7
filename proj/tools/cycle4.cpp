#include <iostream>
#include <string>
#include <vector>

#include "cycle4/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cycle4::cli::run(args, std::cout, std::cerr);
}
