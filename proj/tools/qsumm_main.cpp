#include "qsumm/cli.hpp"

int main(int argc, char** argv) {
    return qsumm::cli::run(argc, argv);
}
