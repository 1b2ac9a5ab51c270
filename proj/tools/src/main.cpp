#include <iostream>
#include <string>
#include <vector>

#include "gbmc_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gbmc::cli::run_app(args, std::cout, std::cerr);
}
