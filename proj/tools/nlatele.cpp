#include "nlatele/cli.hpp"

int main(int argc, char** argv) { return nlatele::cli::run(argc, argv); }
