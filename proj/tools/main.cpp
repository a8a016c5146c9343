#include <iostream>

#include "factoropt/cli.hpp"

int main(int argc, char** argv) { return factoropt::cli::run(argc, argv, std::cout, std::cerr); }
