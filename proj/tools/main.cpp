#include "dirtyregion/cli.hpp"

int main(int argc, char** argv) { return dirtyregion::run_cli(argc, argv); }
