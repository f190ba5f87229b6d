#include <iostream>

#include "wcont/cli.hpp"

int main(int argc, char** argv) { return wcont::run_cli(argc, argv, std::cout, std::cerr); }
