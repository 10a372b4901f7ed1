#include "dforms/cli.hpp"

int main(int argc, char** argv) { return dforms::cli_main(argc, argv); }
