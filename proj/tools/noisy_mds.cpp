#include "noisy_mds/cli.hpp"

int main(int argc, char** argv) { return noisy_mds::cli::run(argc, argv); }
