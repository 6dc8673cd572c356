#include "ineqreg/cli.hpp"

int main(int argc, char** argv) { return ineqreg::run_cli(argc, argv); }
