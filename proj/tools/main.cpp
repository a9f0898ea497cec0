#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return boxology::cli::run(args, std::cout, std::cerr, boxology::cli::environment_from_process());
}
