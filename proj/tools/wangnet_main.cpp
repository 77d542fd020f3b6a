#include <iostream>

#include "wangnet/cli.hpp"

int main(int argc, char** argv) {
    return wangnet::run_cli(argc, argv, std::cout, std::cerr);
}
