#include <iostream>
#include <string>
#include <vector>

#include "valproj/cli.hpp"
#include "valproj/logging.hpp"

int main(int argc, char** argv) {
    valproj::init_logging();
    std::vector<std::string> args(argv + 1, argv + argc);
    return valproj::cli::run(args, std::cout, std::cerr);
}
