#include <iostream>

#include "linmdtw/cli.hpp"

int main(int argc, char** argv) { return lmdtw::run_cli(argc, argv, std::cout, std::cerr); }
