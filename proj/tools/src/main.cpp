#include <iostream>

#include "lane_emden_cli/cli.hpp"

int main(int argc, char** argv) { return lane_emden::cli::cli_main(argc, argv, std::cout, std::cerr); }
