#include "moelab/cli.hpp"

int main(int argc, char** argv) { return moelab::cli::run_cli(argc, argv); }
