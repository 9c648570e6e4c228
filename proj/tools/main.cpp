#include "gwdrought/cli.hpp"

int main(int argc, char** argv) { return gwd::cli::run(argc, argv); }
