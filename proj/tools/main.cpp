#include <iostream>

#include "homonym/cli.hpp"

int main(int argc, char** argv) { return homonym::cli::main(argc, argv, std::cout, std::cerr); }
