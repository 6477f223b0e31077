#include <iostream>

#include "spherex/cli.hpp"

int main(int argc, char** argv) {
  return spherex::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
