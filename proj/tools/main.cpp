#include <iostream>

#include "wvgg/cli.hpp"

int main(int argc, char** argv) { return wvgg::cli::run(argc, argv, std::cout, std::cerr); }
