#include <iostream>

#include "spanalloc/cli.hpp"

int main(int argc, char** argv) { return spanalloc::cli::run(argc, argv, std::cout, std::cerr); }
