#include <iostream>

#include "acceptance_suite.hpp"

int main() { return acceptance::report(acceptance::run_all(), std::cout); }
