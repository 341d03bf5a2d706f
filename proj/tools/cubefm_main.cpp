#include <iostream>

#include "cubefm/cli.hpp"

int main(int argc, char** argv) { return cubefm::cli_main(argc, argv, std::cout, std::cerr); }
