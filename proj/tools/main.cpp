#include <string>
#include <vector>

#include "smflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return smflow::cli::run_command(args);
}
