#include <iostream>

#include "gtprobe_cli.hpp"

int main(int argc, char** argv) { return gtprobe::cli::run_cli(argc, argv, std::cout, std::cerr); }
