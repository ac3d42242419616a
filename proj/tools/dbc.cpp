#include <iostream>

#include "dbc/cli.hpp"

int main(int argc, char** argv) { return dbc::run_cli(argc, argv, std::cout); }
