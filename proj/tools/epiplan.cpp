#include <iostream>

#include "epi/cli.hpp"

int main(int argc, char** argv)
{
    return epi::cli::main(argc, argv, std::cout, std::cerr);
}
