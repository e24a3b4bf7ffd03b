#include <iostream>

#include "rbd_cli/cli.hpp"

int main(int argc, char** argv) { return rbd::cli::run(argc, argv, std::cout, std::cerr); }
