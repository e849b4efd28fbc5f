#include "rigidflock/cli.hpp"

int main(int argc, char** argv) { return rigidflock::cli::run(argc, argv); }
