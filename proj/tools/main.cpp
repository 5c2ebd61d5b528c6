#include "ffedge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ffedge::cli_main(argc, argv, std::cout, std::cerr); }
