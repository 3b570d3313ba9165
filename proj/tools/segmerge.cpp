#include "segmerge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return segmerge::cli::run(argc, argv, std::cout, std::cerr); }
