#include "heisttrace/cli.hpp"

int main(int argc, char** argv) { return heisttrace::run_cli(argc, argv); }
