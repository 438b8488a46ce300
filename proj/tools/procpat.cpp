#include "procpat/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return procpat::run_cli(argc, argv, std::cout, std::cerr);
}
