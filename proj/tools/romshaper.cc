#include <iostream>

#include "romshaper/app/commands.h"

int main(int argc, char** argv) {
  return romshaper::RunCli(argc, argv, std::cout, std::cerr);
}
