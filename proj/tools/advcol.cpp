#include <iostream>

#include "advcol/cli.hpp"

int main(int argc, char** argv) { return advcol::cli::main(argc, argv, std::cout, std::cerr); }
