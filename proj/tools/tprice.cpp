#include <iostream>
#include <string>
#include <vector>

#include "tprice/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return tprice::cli::run(args, std::cout, std::cerr);
}
