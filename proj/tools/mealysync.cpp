#include "cli.hpp"

int main(int argc, char** argv) {
  return mealysync::cli::main(argc, argv);
}
