#include <cstdio>
int main() {
    std::puts("hg: not yet implemented");
    return 1;
}
