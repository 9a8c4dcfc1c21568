#include <iostream>

#include "gmwcs_tools/cli.hpp"

int main(int argc, char **argv) {
    return gmwcs::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
