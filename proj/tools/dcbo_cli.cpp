#include <iostream>

#include "dcbo/cli.hpp"

int main(int argc, char** argv) {
  return dcbo::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
