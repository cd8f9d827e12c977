#include <iostream>

#include "fellbundle/cli.hpp"

int main(int argc, char** argv) { return fell::cli::run_command(argc, argv, std::cout, std::cerr); }
