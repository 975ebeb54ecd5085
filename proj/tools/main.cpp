#include "latticegen/cli.hpp"

int main(int argc, char** argv) { return latticegen::dispatch(argc, argv); }
