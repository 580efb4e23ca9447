#include <iostream>
#include <string>
#include <vector>

#include "nucleus/report.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nucleus::run(args, std::cout, std::cerr);
}
