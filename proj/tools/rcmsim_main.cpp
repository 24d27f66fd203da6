#include <cstdio>

#include "rcmsim/version.hpp"

int main() {
  std::printf("rcmsim %s (cli wiring pending)\n", rcmsim::version());
  return 0;
}
