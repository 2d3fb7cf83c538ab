#include <iostream>
#include <string>
#include <vector>

#include "kmcert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kmcert::run_cli(args, std::cout, std::cerr);
}
