#include "umrn/cli.hpp"

int main(int argc, char** argv) { return umrn::cli::run(argc, argv); }
