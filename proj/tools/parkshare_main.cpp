#include "parkshare/cli.hpp"

int main(int argc, char** argv) { return parkshare::cli::run(argc, argv); }
