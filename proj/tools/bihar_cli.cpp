#include <iostream>

#include "bihar/cli.hpp"

int main(int argc, char** argv) { return bihar::run_cli(argc, argv, std::cout, std::cerr); }
