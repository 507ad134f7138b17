#include <iostream>
#include <string>
#include <vector>

#include "lbcalc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lbcalc::cli::run(args, std::cout, std::cerr);
}
