#include <iostream>

#include "qverify/cli.hpp"

int main(int argc, char** argv) { return qv::cli_main(argc, argv, std::cout, std::cerr); }
