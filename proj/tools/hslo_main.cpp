#include <iostream>

#include "hslo/cli/app.hpp"

int main(int argc, char** argv) { return hslo::cli::run_cli(argc, argv, std::cout, std::cerr); }
