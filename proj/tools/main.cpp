#include <iostream>

#include "natdens_cli.hpp"

int main(int argc, char** argv) { return natdens::cli::run(argc, argv, std::cout, std::cerr); }
