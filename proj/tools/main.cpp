#include <iostream>

#include "dockslim/cli.hpp"

int main(int argc, char** argv) { return dockslim::run_cli(argc, argv, std::cout, std::cerr); }
