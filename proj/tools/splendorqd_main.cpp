#include <iostream>

#include "splendorqd/cli.hpp"

int main(int argc, char** argv) { return sqd::cli::run_cli(argc, argv, std::cout, std::cerr); }
