#include <cstdio>

int main() {
    std::puts("cellip: command-line interface not wired up yet");
    return 1;
}
