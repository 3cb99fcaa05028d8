#include <string>
#include <vector>

#include "rankcluster/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rankcluster::cli::run_cli(args);
}
