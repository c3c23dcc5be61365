#include "fincast/cli.hpp"

int main(int argc, char** argv) { return fincast::cli::run(argc, argv); }
