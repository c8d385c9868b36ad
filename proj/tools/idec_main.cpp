#include <iostream>

#include "idec/cli/commands.hpp"

int main(int argc, char** argv) {
  return idec::cli::main_entry(argc, argv, std::cout, std::cerr);
}
