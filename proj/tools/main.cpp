#include "ltg/cli.hpp"

int main(int argc, char** argv) { return ltg::run(argc, argv); }
