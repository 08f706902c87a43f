#include <iostream>
#include <vector>

#include "kanrw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kanrw::cli::run(args, std::cout, std::cerr);
}
