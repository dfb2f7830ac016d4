#include <iostream>

#include "erae/cli.hpp"

int main(int argc, char** argv) { return erae::cli::run(argc, argv, std::cout, std::cerr); }
