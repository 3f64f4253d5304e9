#include <iostream>

#include "hwbdd/cli.hpp"

int main(int argc, char** argv) {
  return hwbdd::cli::run(argc, argv, std::cout, std::cerr);
}
