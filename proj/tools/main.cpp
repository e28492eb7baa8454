#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return wip::cli::run(argc, argv, std::cout, std::cerr); }
