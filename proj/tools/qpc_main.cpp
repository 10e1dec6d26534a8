#include "qpc/qpc.hpp"
int main() { return 0; }
