#include "usage_synth/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return usage_synth::run_cli(argc, argv, std::cout, std::cerr);
}
