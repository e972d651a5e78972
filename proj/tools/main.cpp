#include <iostream>

#include "swaptest/cli.hpp"

int main(int argc, char** argv) {
    return swaptest::cli::run(argc, argv, std::cout, std::cerr);
}
