#include "testforge/service/cli.hpp"

int main(int argc, char** argv) {
    return testforge::cli::run_cli(argc, argv);
}
