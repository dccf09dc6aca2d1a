#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dante/cli_io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dante::cli::main_entry(args, std::cout, std::cerr,
                                  [](const char* name) { return std::getenv(name); });
}
