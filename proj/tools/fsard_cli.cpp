#include <iostream>

#include "fsard/cli.hpp"

int main(int argc, char** argv) {
    return fsard::cli::run(argc, argv, std::cout, std::cerr);
}
