#include <iostream>

#include "worldtraj/cli.hpp"

int main(int argc, char** argv) { return worldtraj::cli::run(argc, argv, std::cout, std::cerr); }
