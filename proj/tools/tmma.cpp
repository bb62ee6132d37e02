#include <iostream>
#include <string>
#include <vector>

#include "tmma/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tmma::cli::run(args, std::cout, std::cerr);
}
