#include "scratch_anomalies/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return scratch_anomalies::cli::run(args, std::cout, std::cerr);
}
