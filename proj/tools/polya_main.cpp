#include <iostream>

#include "polya/cli.hpp"

int main(int argc, char** argv) { return polya::run_cli(argc, argv, std::cout, std::cerr); }
