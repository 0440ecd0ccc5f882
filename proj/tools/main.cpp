#include "rsobolev/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rsobolev::run_cli(argc, argv, std::cout, std::cerr); }
