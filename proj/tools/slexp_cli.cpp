#include "slexp/harness.hpp"

int main(int argc, char** argv) { return slexp::cli_main(argc, argv); }
