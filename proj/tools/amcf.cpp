#include "amcf/cli.hpp"

int main(int argc, char** argv) { return amcf::cli::main_entry(argc, argv); }
