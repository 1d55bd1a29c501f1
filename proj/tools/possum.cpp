#include "possum/cli.hpp"

int main(int argc, char** argv) { return possum::cli::main(argc, argv); }
