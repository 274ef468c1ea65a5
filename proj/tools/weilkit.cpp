#include <iostream>

#include "weilkit/cli.hpp"

int main(int argc, char** argv) { return weilkit::run_cli(argc, argv, std::cout, std::cerr); }
