#include <iostream>

#include "pdclab/io/run.hpp"

int main(int argc, char **argv) { return pdclab::io::run_cli(argc, argv, std::cout, std::cerr); }
