#include <iostream>

#include "qset_cli/cli.hpp"

int main(int argc, char** argv) { return qset::cli::run(argc, argv, std::cout, std::cerr); }
