#include "uavrelay/cli.hpp"

int main(int argc, char** argv) { return uavrelay::cli::main(argc, argv); }
