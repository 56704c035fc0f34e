#include <iostream>

#include "qs2l/cli.hpp"

int main(int argc, char** argv) { return qs2l::cli::run(argc, argv, std::cout, std::cerr); }
