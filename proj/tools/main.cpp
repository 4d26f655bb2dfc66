#include <iostream>

#include "salpcc_cli/commands.hpp"

int main(int argc, char** argv) { return salpcc::cli::run(argc, argv, std::cout, std::cerr); }
