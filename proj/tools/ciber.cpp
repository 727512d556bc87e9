#include "ciber/cli.hpp"

int main(int argc, char** argv) { return ciber::cli::dispatch(argc, argv); }
