#include <cstdio>
int main() { std::puts("asymp: placeholder"); return 0; }
