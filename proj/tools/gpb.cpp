#include <iostream>

#include "gpb/cli.h"

int main(int argc, char** argv) {
  return gpb::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
