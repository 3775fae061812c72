#include <clf/cli.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    clf::cli::CliResult result = clf::cli::dispatch(args);
    std::cout << result.out;
    std::cerr << result.err;
    return result.code;
}
