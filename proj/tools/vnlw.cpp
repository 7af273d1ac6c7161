#include <iostream>

#include "vnlw/cli.hpp"

int main(int argc, char** argv) { return vnlw::cli::main(argc, argv, std::cout, std::cerr); }
