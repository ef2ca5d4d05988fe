#include "smoothpic/runner.hpp"

int main(int argc, char** argv) { return smoothpic::cli(argc, argv); }
