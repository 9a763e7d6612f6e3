#include <string>
#include <vector>

#include "qbounce/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return qbounce::cli_main(args);
}
