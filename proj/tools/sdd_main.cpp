#include "sdd/cli.hpp"

int main(int argc, char** argv) { return sdd::cli::run(argc, argv); }
