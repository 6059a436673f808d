#include <cstdio>
#include <string>
#include <vector>

#include <ncmf/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    ncmf::CliResult result = ncmf::run_cli(std::move(args));
    std::fputs(result.output.c_str(), stdout);
    return result.code;
}
