#include "lorentz/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << lorentz::cli::usage_text;
        return 2;
    }
    std::ios::sync_with_stdio(false);
    const std::vector<std::string> args(argv + 1, argv + argc);
    return lorentz::cli::run(args, std::cout, std::cerr);
}
