#include "argnet/cli/commands.hpp"

int main(int argc, char** argv) { return argnet::cli::run_cli(argc, argv); }
