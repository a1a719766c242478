#include <iostream>

#include "credinfo/cli.hpp"

int main(int argc, char** argv) { return credinfo::run_cli(argc, argv, std::cout, std::cerr); }
