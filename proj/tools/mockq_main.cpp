#include "mockq/cli.hpp"

int main(int argc, char** argv) { return mockq::run_cli(argc, argv); }
