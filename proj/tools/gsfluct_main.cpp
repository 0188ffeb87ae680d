#include "gsfluct/cli.hpp"

int main(int argc, char** argv) { return gsfluct::cli::run_cli(argc, argv); }
