#include "cli.hpp"

int main(int argc, char** argv) { return hitlab::cli::run(argc, argv); }
