#include <iostream>

#include "stsq_cli.hpp"

int main(int argc, char** argv) { return stsq::cli::run(argc, argv, std::cout, std::cerr); }
