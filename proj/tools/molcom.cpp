#include "molcom/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return molcom::cli::run(argc, argv, std::cout, std::cerr);
}
