#include <iostream>
#include <string>
#include <vector>

#include "rolling_disk/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return rolling_disk::cli::run(args, std::cout, std::cerr);
}
