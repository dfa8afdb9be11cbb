#include "rydgate_cli/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return rydgate::cli::run(argc, argv, std::cout, std::cerr);
}
