#include "asfilt/cli.hpp"

int main(int argc, char** argv) { return asfilt::cli::run(argc, argv); }
