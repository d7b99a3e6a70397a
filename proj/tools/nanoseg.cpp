#include "nanoseg/cli.hpp"

int main(int argc, char** argv) { return nanoseg::cli::run(argc, argv); }
