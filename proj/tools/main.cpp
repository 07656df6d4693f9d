#include <iostream>

#include "sephier/cli.hpp"

int main(int argc, char** argv) { return sephier::run_cli(argc, argv, std::cout, std::cerr); }
