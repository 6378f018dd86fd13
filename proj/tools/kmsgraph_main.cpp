#include <iostream>

#include "kmsgraph/commands.hpp"

int main(int argc, char** argv) {
  return kmsgraph::cli_main(argc, argv, std::cout, std::cerr);
}
