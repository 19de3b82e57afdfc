#include "isentropic/cli.hpp"

int main(int argc, char** argv) { return isen::cli::main_entry(argc, argv); }
