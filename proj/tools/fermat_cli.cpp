#include "cli_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fermat::cli::run(args, std::cout, std::cerr);
}
