#include <iostream>

#include "gcdsum/cli.hpp"

int main(int argc, char** argv) { return gcdsum::cli_main(argc, argv, std::cout, std::cerr); }
