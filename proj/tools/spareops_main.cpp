#include "spareops/cli.hpp"

int main(int argc, char** argv) { return spareops::cli::run(argc, argv); }
