#include <iostream>
#include <string>
#include <vector>

#include "cl4/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cl4::run_command(args, std::cin, std::cout, std::cerr);
}
