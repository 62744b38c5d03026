#include <iostream>

#include "rotenberg/cli.hpp"
#include "rotenberg/exec.hpp"

int main(int argc, char** argv) {
    rotenberg::configure_threads_from_env();
    return rotenberg::cli_main(argc, argv, std::cout, std::cerr);
}
