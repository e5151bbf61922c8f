#include "qclust/cli.hpp"

int main(int argc, char** argv) { return qclust::run_cli(argc, argv); }
