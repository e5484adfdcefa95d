#include <iostream>
#include <string>
#include <vector>

#include "hitch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hitch::cli::run(args, std::cout, std::cerr);
}
