#include "sgrowth/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sgrowth::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
