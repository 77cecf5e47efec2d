#include "fairaug/cli.hpp"

int main(int argc, char** argv) { return fairaug::cli::run(argc, argv); }
