#include <iostream>

#include "qrep/cli.hpp"

int main(int argc, char** argv) {
  return qrep::cli::run_cli(argc, argv, std::cout, std::cerr);
}
