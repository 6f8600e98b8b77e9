#include "cli.hpp"

int main(int argc, char** argv) { return calign::cli::run(argc, argv); }
