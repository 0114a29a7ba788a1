#include <iostream>

#include "imdet/cli.hpp"

int main(int argc, char** argv) {
  return imdet::cli::run(argc, argv, std::cout, std::cerr);
}
