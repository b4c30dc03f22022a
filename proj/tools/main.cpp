#include <iostream>

#include "rmt_cli/cli.hpp"

int main(int argc, char** argv) { return rmt::cli::run(argc, argv, std::cout, std::cerr); }
