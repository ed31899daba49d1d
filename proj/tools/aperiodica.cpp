#include "aperiodica/cli.hpp"

int main(int argc, char** argv) { return aperiodica::cli::main_entry(argc, argv); }
