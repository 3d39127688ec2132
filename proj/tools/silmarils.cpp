#include <iostream>

#include "silmarils/cli.hpp"

int main(int argc, char** argv) { return silmarils::cli::run(argc, argv, std::cout, std::cerr); }
