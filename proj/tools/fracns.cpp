#include "fracns/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fracns::cli::run_cli(argc, argv, std::cout, std::cerr); }
