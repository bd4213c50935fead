#include <string>
#include <vector>

#include "ftmea/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ftmea::cli::run(args);
}
