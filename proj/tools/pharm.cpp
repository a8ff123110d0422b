#include <iostream>

#include "pharm/cli.hpp"

int main(int argc, char** argv) { return pharm::run_cli(argc, argv, std::cout, std::cerr); }
