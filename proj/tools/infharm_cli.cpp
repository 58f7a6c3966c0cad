#include <iostream>

#include "infharm/cli.hpp"

int main(int argc, char** argv) { return infharm::run_cli(argc, argv, std::cout, std::cerr); }
