#include <iostream>

#include "weaktype/cli.hpp"

int main(int argc, char** argv) { return weaktype::run_cli(argc, argv, std::cout, std::cerr); }
