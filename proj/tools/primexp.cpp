#include "primexp/cli.hpp"

int main(int argc, char** argv) { return primexp::run_cli(argc, argv); }
