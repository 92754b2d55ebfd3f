#include <iostream>

#include "gdl/cli.hpp"

int main(int argc, char** argv) {
  return gdl::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
