#include "iqplab/cli.hpp"

int main(int argc, char** argv) { return iqplab::cli::run(argc, argv); }
