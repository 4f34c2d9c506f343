#include <iostream>

#include "cc4/cli.hpp"

int main(int argc, char** argv) { return cc4::cli::main(argc, argv, std::cout, std::cerr); }
