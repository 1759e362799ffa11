#include <iostream>

#include "gnep/cli/commands.hpp"

int main(int argc, char** argv) { return gnep::cli::run(argc, argv, std::cout, std::cerr); }
