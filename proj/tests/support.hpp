#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gridlag/gridlag.hpp>

namespace testing {

using namespace gridlag;

inline GridDiagram random_grid(int n, std::mt19937_64& rng) {
  std::vector<int> x(n), o(n);
  std::iota(x.begin(), x.end(), 0);
  std::iota(o.begin(), o.end(), 0);
  while (true) {
    std::shuffle(x.begin(), x.end(), rng);
    std::shuffle(o.begin(), o.end(), rng);
    bool clash = false;
    for (int c = 0; c < n; ++c) clash |= x[c] == o[c];
    if (!clash) return GridDiagram{n, x, o};
  }
}

inline std::vector<Gen> all_gens(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Gen> out;
  do out.push_back(pack(p));
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline GridDiagram corpus(const std::string& name) {
  std::ifstream in(std::string(GRIDLAG_CORPUS) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_grid(ss.str());
}

}  // namespace testing
