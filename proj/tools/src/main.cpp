#include <iostream>

#include "fiberpol/cli/commands.hpp"

int main(int argc, char** argv) { return fiberpol::cli::run(argc, argv, std::cout, std::cerr); }
