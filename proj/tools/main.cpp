#include <iostream>

#include "koszulkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  koszulkit::cli::CommandResult r = koszulkit::cli::run_command(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}
