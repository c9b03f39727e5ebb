#include "adia/runner.hpp"

int main(int argc, char** argv) { return adia::run_cli(argc, argv); }
