#pragma once

#include <numeric>
#include <vector>

namespace fkr {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n = 0) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int add() {
        p.push_back(int(p.size()));
        return p.back();
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace fkr
