#include "nestedvrp/cli.hpp"

int main(int argc, char** argv) { return nvrp::run(argc, argv); }
