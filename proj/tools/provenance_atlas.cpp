#include <string>
#include <vector>

#include "provenance_atlas/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return provenance_atlas::run_command(args);
}
