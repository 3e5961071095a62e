#include <iostream>

#include "posasym/cli.hpp"

int main(int argc, char** argv) { return posasym::cli::run(argc, argv, std::cout, std::cerr); }
