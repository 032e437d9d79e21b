#include "fieldgen/cli.hpp"

int main(int argc, char** argv) { return fieldgen::run_cli(argc, argv); }
