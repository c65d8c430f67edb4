#include "dopfac/cli.hpp"

int main(int argc, char** argv) { return dopfac::run_cli(argc, argv); }
