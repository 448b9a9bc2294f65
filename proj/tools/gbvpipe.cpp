#include "gbv/cli.hpp"

int main(int argc, char** argv) { return gbv::cli::run(argc, argv); }
