#include <iostream>
#include <string>
#include <vector>

#include "fibscope/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fibscope::run(args, std::cout, std::cerr);
}
