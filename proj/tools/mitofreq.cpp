#include <iostream>

#include "mitofreq/cli.hpp"

int main(int argc, char** argv) { return mitofreq::run_cli(argc, argv, std::cout, std::cerr); }
