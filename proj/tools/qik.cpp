#include <iostream>

#include "qik/cli.hpp"

int main(int argc, char** argv) { return qik::cli::run(argc, argv, std::cout, std::cerr); }
