#include <string>
#include <vector>

#include "hecklab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hecklab::cli::run(args);
}
