#include "raillp/cli.hpp"

int main(int argc, char** argv) { return raillp::run_cli(argc, argv); }
