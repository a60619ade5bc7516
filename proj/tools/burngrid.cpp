#include <iostream>

#include "burngrid/cli.hpp"

int main(int argc, char** argv) { return burngrid::run_cli(argc, argv, std::cout, std::cerr); }
