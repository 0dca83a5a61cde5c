#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return oseen_ale::cli::run_cli(argc, argv, std::cout, std::cerr); }
