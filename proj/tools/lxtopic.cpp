#include "lxtopic/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lxtopic::run_cli(argc, argv, std::cout, std::cerr); }
