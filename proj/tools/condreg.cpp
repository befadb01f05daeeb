#include "condreg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return condreg::cli::run(argc, argv, std::cout, std::cerr);
}
