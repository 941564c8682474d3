#include "seqsparse/cli.hpp"

int main(int argc, char** argv) { return seqsparse::run_cli(argc, argv); }
