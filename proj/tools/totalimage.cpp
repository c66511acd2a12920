#include <iostream>

#include "totalimage/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return totalimage::run_cli(args, std::cout, std::cerr);
}
