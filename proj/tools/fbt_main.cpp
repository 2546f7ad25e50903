#include <iostream>
#include <string>
#include <vector>

#include "fbt/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fbt::cli::execute(args, std::cout, std::cerr);
}
