#include "dirf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return dirf::cli::run_main(argc, argv, std::cout, std::cerr);
}
