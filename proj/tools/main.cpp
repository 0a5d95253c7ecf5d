#include <iostream>

#include "nbpk/cli.hpp"

int main(int argc, char** argv) { return nbpk::cli::run(argc, argv, std::cout, std::cerr); }
