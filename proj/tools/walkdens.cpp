#include <iostream>

#include "walkdens/cli/cli.hpp"

int main(int argc, char** argv) { return walkdens::cli::run(argc, argv, std::cout, std::cerr); }
