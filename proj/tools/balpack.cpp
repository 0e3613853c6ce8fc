#include "balpack/cli.hpp"

int main(int argc, char** argv) { return balpack::cli::run(argc, argv); }
