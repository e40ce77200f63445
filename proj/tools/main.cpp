#include <iostream>

#include "interpnet/cli.hpp"

int main(int argc, char** argv) { return interpnet::cli_main(argc, argv, std::cout, std::cerr); }
