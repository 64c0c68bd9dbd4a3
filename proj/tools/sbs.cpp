#include "cli.hpp"

int main(int argc, char** argv) { return sbs::cli::run_cli(argc, argv); }
