#include <cstdio>

#include "ratnet/ratnet.h"

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::puts("ratnet cli placeholder");
  return 0;
}
