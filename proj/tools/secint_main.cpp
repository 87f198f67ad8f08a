#include <iostream>

#include "secint/cli.hpp"

int main(int argc, char** argv)
{
    const auto r = secint::run_cli({argv + 1, argv + argc});
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}
