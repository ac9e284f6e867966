#include <iostream>

#include "djopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return djopt::run_cli(args, std::cout, std::cerr);
}
