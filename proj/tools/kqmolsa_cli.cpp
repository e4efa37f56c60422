#include <iostream>

#include "kqmolsa/commands.hpp"

int main(int argc, char** argv) { return kqmolsa::run_cli(argc, argv, std::cout, std::cerr); }
