#include "wavesel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wavesel::cli::run(argc, argv, std::cout, std::cerr); }
