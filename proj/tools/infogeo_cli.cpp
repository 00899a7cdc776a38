#include <iostream>

#include "infogeo/cli.hpp"

int main(int argc, char** argv) { return infogeo::run_cli(argc, argv, std::cout, std::cerr); }
