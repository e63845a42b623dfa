#include "cli.hpp"

int main(int argc, char** argv) { return rslevy::cli::run(argc, argv); }
