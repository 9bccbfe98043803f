#include <iostream>

#include "tworound/cli.hpp"

int main(int argc, char** argv) { return tworound::run_cli(argc, argv, std::cout, std::cerr); }
