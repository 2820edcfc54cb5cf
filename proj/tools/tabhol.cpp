#include <iostream>

#include "tabhol/cli.hpp"

int main(int argc, char** argv) { return tabhol::cli_main(argc, argv, std::cout, std::cerr); }
