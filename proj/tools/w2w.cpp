#include <iostream>

#include "w2w/cli.hpp"

int main(int argc, char** argv) {
  return w2w::cli::run(argc, argv, std::cout, std::cerr);
}
