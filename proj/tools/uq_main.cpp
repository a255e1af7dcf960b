#include <iostream>
#include <string>
#include <vector>

#include "uq/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return uq::run_cli(args, std::cout, std::cerr);
}
