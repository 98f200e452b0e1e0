#include <iostream>

#include "teg/cli.hpp"

int main(int argc, char** argv) { return teg::cli::run(argc, argv, std::cout, std::cerr); }
