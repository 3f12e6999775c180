#include <iostream>

#include "roundforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return roundforge::run_cli(args, std::cout, std::cerr);
}
