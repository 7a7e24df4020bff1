#include "presort/cli.hpp"

int main(int argc, char** argv) { return presort::cli::run(argc, argv); }
