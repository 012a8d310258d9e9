#include <iostream>
#include <string>
#include <vector>

#include "resire/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return resire::cli_main(args, std::cout, std::cerr);
}
