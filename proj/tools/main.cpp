#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return stein::cli::run(argc, argv, std::cout, std::cerr); }
