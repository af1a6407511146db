#include <iostream>

#include "lpt/service.hpp"

int main(int argc, char** argv) { return lpt::run_cli(argc, argv, std::cout, std::cerr); }
