#include <string>
#include <vector>

#include "exbound/runner.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc);
    for (int i = 0; i < argc; ++i) args.emplace_back(argv[i]);
    return exbound::run_cli(args);
}
