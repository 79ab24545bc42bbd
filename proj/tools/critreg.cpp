#include "critreg/cli.hpp"

int main(int argc, char** argv) { return crg::cli::run(argc, argv); }
