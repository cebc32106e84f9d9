#include <iostream>

#include "tensilex/cli/app.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return tensilex::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
