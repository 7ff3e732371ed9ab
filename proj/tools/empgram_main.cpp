#include <iostream>

#include "empgram/cli.hpp"

int main(int argc, char** argv) { return empgram::cli::run(argc, argv, std::cout, std::cerr); }
