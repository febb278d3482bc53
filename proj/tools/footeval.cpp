#include <iostream>
#include <string>
#include <vector>

#include "footeval/cli.hpp"

int main(int argc, char** argv) {
    return footeval::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
