#include <iostream>
#include <string>
#include <vector>

#include "projmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return projmc::run_cli(args, std::cout, std::cerr);
}
