#include <iostream>
#include <string>
#include <vector>

#include "minimax/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return minimax::cli_entry(args, std::cout, std::cerr);
}
