#include <iostream>

#include "pss/cli/cli.hpp"

int main(int argc, char** argv) {
    return pss::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
