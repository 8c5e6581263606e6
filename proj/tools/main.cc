// SPDX-License-Identifier: MIT
// Entry point of the hornlog command-line tool.
#include "cli.hh"

#include <iostream>

int
main(int argc, char** argv)
{
  return hornlog::run_cli(argc, argv, std::cout, std::cerr);
}
