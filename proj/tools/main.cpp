#include "grmssvdd/experiment.hpp"

int main(int argc, char** argv) { return grmssvdd::run_cli(argc, argv); }
