#include "cmod/cli.hpp"

int main(int argc, char** argv) { return cmod::run_cli(argc, argv); }
