#include "polar_rsma/cli.hpp"

int main(int argc, char** argv) { return polar_rsma::run_cli(argc, argv); }
