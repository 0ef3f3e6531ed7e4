#include "etgbt/cli.hpp"

int main(int argc, char** argv) { return etgbt::cli::run(argc, argv); }
