#include <iostream>

#include "drmel_cli/cli.hpp"

int main(int argc, char** argv) { return drmel::cli::run_cli(argc, argv, std::cout, std::cerr); }
