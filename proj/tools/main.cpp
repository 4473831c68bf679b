#include "masep/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return masep::run(argc, argv, std::cout, std::cerr); }
