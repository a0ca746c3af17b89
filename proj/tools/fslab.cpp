#include <iostream>
#include <string>
#include <vector>

#include <fslab/cli.hpp>

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return fslab::run(args, std::cout, std::cerr);
}
