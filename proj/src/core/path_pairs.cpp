// Copyright 2026 The opl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "core/path_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <thread>

#include "core/error.hpp"

namespace opl {
namespace {

using Mask = std::uint32_t;

constexpr Mask bit(int v) { return Mask{1} << v; }

void check_guard(int n, int L, int guard) {
  if (n < 3) throw_parameter("n must be at least 3");
  if (n > guard || n > kMaxExactVertices) {
    throw Error(ErrorKind::kBudget, "path enumeration for n = " + std::to_string(n) + " exceeds the guard n <= " +
                                        std::to_string(guard) + " (about " + to_string(path_count(n, L)) +
                                        " paths per endpoint pair)");
  }
}

// Positions of the first path's vertices, -1 when absent.
std::vector<int> positions(const Path& path, int n) {
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t t = 0; t < path.vertices.size(); ++t) pos[static_cast<std::size_t>(path.vertices[t])] = static_cast<int>(t);
  return pos;
}

template <class Visit>
void for_each_path(int n, int u, int v, int max_len, Visit&& visit) {
  std::vector<int> stack{u};
  auto dfs = [&](auto&& self, Mask used) -> void {
    for (int x = 0; x < n; ++x) {
      if (used & bit(x)) continue;
      stack.push_back(x);
      if (x == v) {
        visit(stack);
      } else if (static_cast<int>(stack.size()) - 1 < max_len) {
        self(self, used | bit(x));
      }
      stack.pop_back();
    }
  };
  dfs(dfs, bit(u));
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, work)));
}

// Per-pair data accumulated while walking the second path edge by edge.
struct WalkState {
  int common = 0;
  int runs = 0;
  int run_start_vertex = -1;
  int run_start_index = -1;
  int run_len = 0;
  bool in_run = false;
  bool opposite = false;
  bool first_common = false;
};

// Integer pair counts keyed by the exponents that determine the kernel.
struct Census {
  int dim;      // max path length + 1
  int edim;     // 2 * max path length + 1
  std::vector<std::uint64_t> type1, type2, same, opposite;
  std::uint64_t disjoint = 0;

  explicit Census(int max_len)
      : dim(max_len + 1),
        edim(2 * max_len + 1),
        type1(static_cast<std::size_t>(dim * dim), 0),
        type2(static_cast<std::size_t>(dim) * dim * dim * dim * dim, 0),
        same(static_cast<std::size_t>(edim * edim), 0),
        opposite(static_cast<std::size_t>(edim), 0) {}

  std::size_t t2(int i, int j, int k, int l, int m) const {
    return (((static_cast<std::size_t>(i) * dim + j) * dim + k) * dim + l) * dim + m;
  }

  void merge(const Census& o) {
    for (std::size_t x = 0; x < type1.size(); ++x) type1[x] += o.type1[x];
    for (std::size_t x = 0; x < type2.size(); ++x) type2[x] += o.type2[x];
    for (std::size_t x = 0; x < same.size(); ++x) same[x] += o.same[x];
    for (std::size_t x = 0; x < opposite.size(); ++x) opposite[x] += o.opposite[x];
    disjoint += o.disjoint;
  }
};

void walk_second_paths(int n, int max_len, const std::vector<int>& pos_a, int len_a, Census& census) {
  auto leaf = [&](int len_b, const WalkState& st) {
    if (st.common == 0) {
      ++census.disjoint;
      return;
    }
    if (st.opposite) {
      if (st.common == 1 && st.first_common) {
        ++census.type1[static_cast<std::size_t>((len_a - 1) * census.dim + (len_b - 1))];
      } else {
        ++census.opposite[static_cast<std::size_t>(len_a + len_b)];
      }
      return;
    }
    if (st.runs == 1) {
      const int i = pos_a[static_cast<std::size_t>(st.run_start_vertex)];
      const int k = st.run_len;
      const int l = len_a - i - k;
      const int m = st.run_start_index;
      const int j = len_b - m - k;
      ++census.type2[census.t2(i, j, k, l, m)];
    } else {
      const int delta = len_b - st.common;
      ++census.same[static_cast<std::size_t>((len_a + delta) * census.edim + (len_a + len_b))];
    }
  };

  auto dfs = [&](auto&& self, int w, int depth, Mask used, const WalkState& st) -> void {
    const int pw = pos_a[static_cast<std::size_t>(w)];
    for (int v = 0; v < n; ++v) {
      if (used & bit(v)) continue;
      WalkState next = st;
      const int pv = pos_a[static_cast<std::size_t>(v)];
      if (pw >= 0 && pv >= 0 && (pv == pw + 1 || pw == pv + 1)) {
        ++next.common;
        if (depth == 0) next.first_common = true;
        if (pv == pw + 1) {
          if (!st.in_run) {
            ++next.runs;
            next.run_start_vertex = w;
            next.run_start_index = depth;
            next.run_len = 0;
          }
          ++next.run_len;
          next.in_run = true;
        } else {
          next.opposite = true;
          next.in_run = false;
        }
      } else {
        next.in_run = false;
      }
      if (v == kVertexB) {
        leaf(depth + 1, next);
      } else if (depth + 1 < max_len) {
        self(self, v, depth + 1, used | bit(v), next);
      }
    }
  };
  dfs(dfs, kVertexS, 0, bit(kVertexS), WalkState{});
}

std::string key(std::initializer_list<std::pair<const char*, int>> fields) {
  std::string out;
  for (const auto& [name, value] : fields) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += std::to_string(value);
  }
  return out;
}

}  // namespace

CutOff::CutOff(int L) : length(L) {
  if (L < 1) throw_parameter("cut-off L must be at least 1, got " + std::to_string(L));
}

CutOff CutOff::default_for(int n) {
  if (n < 2) throw_parameter("n must be at least 2");
  const double ln = std::log(static_cast<double>(n));
  return CutOff(std::max(1, static_cast<int>(std::ceil(ln * ln))));
}

BigInt path_count(int n, int L) {
  BigInt total = 0;
  for (int len = 1; len <= std::min(L, n - 1); ++len) total += falling_factorial(n - 2, static_cast<unsigned long>(len - 1));
  return total;
}

std::vector<Path> enum_paths(int n, int u, int v, CutOff L, int guard) {
  check_guard(n, L.length, guard);
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw_parameter("path endpoints must be distinct vertices below n");
  std::vector<Path> out;
  for_each_path(n, u, v, L.length, [&](const std::vector<int>& verts) { out.push_back(Path{verts}); });
  std::stable_sort(out.begin(), out.end(), [](const Path& x, const Path& y) {
    if (x.length() != y.length()) return x.length() < y.length();
    return x.vertices < y.vertices;
  });
  return out;
}

std::string to_string(PairVariant variant) {
  switch (variant) {
    case PairVariant::kDisjoint: return "Disjoint";
    case PairVariant::kType1: return "Type1";
    case PairVariant::kType2: return "Type2";
    case PairVariant::kOtherSame: return "OtherSame";
    case PairVariant::kOtherOpposite: return "OtherOpposite";
  }
  return "?";
}

PairClass classify_pair(const Path& path_a, const Path& path_b) {
  const int n = 1 + std::max(*std::max_element(path_a.vertices.begin(), path_a.vertices.end()),
                             *std::max_element(path_b.vertices.begin(), path_b.vertices.end()));
  validate_path(path_a, std::max(n, 3));
  validate_path(path_b, std::max(n, 3));
  if (path_a.front() != kVertexA || path_a.back() != kVertexS || path_b.front() != kVertexS ||
      path_b.back() != kVertexB) {
    throw Error(ErrorKind::kContract, "expected a path a -> s and a path s -> b");
  }

  const auto pos_a = positions(path_a, std::max(n, 3));
  const auto& wb = path_b.vertices;
  const int len_b = static_cast<int>(path_b.length());
  std::vector<bool> common(static_cast<std::size_t>(len_b), false), same(static_cast<std::size_t>(len_b), false);
  for (int t = 0; t < len_b; ++t) {
    const int pu = pos_a[static_cast<std::size_t>(wb[static_cast<std::size_t>(t)])];
    const int pv = pos_a[static_cast<std::size_t>(wb[static_cast<std::size_t>(t) + 1])];
    if (pu >= 0 && pv >= 0 && std::abs(pu - pv) == 1) {
      common[static_cast<std::size_t>(t)] = true;
      same[static_cast<std::size_t>(t)] = (pv == pu + 1);
    }
  }

  PairClass cls;
  cls.overlap.len_a = static_cast<int>(path_a.length());
  cls.overlap.len_b = len_b;
  int runs = 0;
  int first_run = -1;
  for (int t = 0; t < len_b; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    if (common[ut]) {
      ++cls.overlap.common;
      if (!same[ut]) cls.opposite = true;
      if (t == 0 || !common[ut - 1]) {
        ++runs;
        if (first_run < 0) first_run = t;
      }
    } else if (t == 0 || common[ut - 1] || pos_a[static_cast<std::size_t>(wb[ut])] >= 0) {
      ++cls.overlap.mu;
    }
  }
  cls.overlap.delta = len_b - cls.overlap.common;

  const int len_a = cls.overlap.len_a;
  if (cls.overlap.common == 0) {
    cls.variant = PairVariant::kDisjoint;
  } else if (cls.opposite) {
    if (cls.overlap.common == 1 && common[0]) {
      cls.variant = PairVariant::kType1;
      cls.params = {len_a - 1, len_b - 1, 0, 0, 0};
    } else {
      cls.variant = PairVariant::kOtherOpposite;
    }
  } else if (runs == 1) {
    int k = 0;
    while (first_run + k < len_b && common[static_cast<std::size_t>(first_run + k)]) ++k;
    const int x = wb[static_cast<std::size_t>(first_run)];
    const int i = pos_a[static_cast<std::size_t>(x)];
    cls.variant = PairVariant::kType2;
    cls.params = {i, len_b - first_run - k, k, len_a - i - k, first_run};
  } else {
    cls.variant = PairVariant::kOtherSame;
  }
  return cls;
}

Rational pair_kernel(const PairClass& cls, const Rational& p) {
  const Rational half = p / 2;
  const auto& o = cls.overlap;
  if (cls.variant == PairVariant::kDisjoint) return 0;
  const auto product = static_cast<unsigned long>(o.len_a + o.len_b);
  if (cls.opposite) return -pow(half, product);
  return pow(half, static_cast<unsigned long>(o.len_a + o.delta)) - pow(half, product);
}

Rational pair_cov(const Path& path_a, const Path& path_b, const Rational& p, int n) {
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1]");
  validate_path(path_a, n);
  validate_path(path_b, n);
  return pair_kernel(classify_pair(path_a, path_b), p);
}

PairSum cov_pairsum(int n, CutOff L, const Rational& p, unsigned threads, int guard) {
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1]");
  const int max_len = std::min(L.length, n - 1);
  const auto first = enum_paths(n, kVertexA, kVertexS, CutOff(max_len), guard);

  threads = resolve_threads(threads, first.size());
  std::vector<Census> partial(threads, Census(max_len));
  auto worker = [&](unsigned t) {
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    for (std::size_t x = t; x < first.size(); x += threads) {
      const auto& verts = first[x].vertices;
      for (std::size_t q = 0; q < verts.size(); ++q) pos[static_cast<std::size_t>(verts[q])] = static_cast<int>(q);
      walk_second_paths(n, max_len, pos, static_cast<int>(first[x].length()), partial[t]);
      for (int v : verts) pos[static_cast<std::size_t>(v)] = -1;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  Census census(max_len);
  for (const auto& c : partial) census.merge(c);

  PairSum out;
  out.n = n;
  out.L = L.length;
  out.p = p;
  out.total = 0;
  for (auto v : {PairVariant::kDisjoint, PairVariant::kType1, PairVariant::kType2, PairVariant::kOtherSame,
                 PairVariant::kOtherOpposite}) {
    out.by_class[v] = 0;
    out.pairs_by_class[v] = 0;
  }
  const Rational half = p / 2;
  auto add = [&](PairVariant v, std::string params, std::uint64_t count, const Rational& kernel) {
    if (count == 0) return;
    const BigInt pairs(static_cast<unsigned long>(count));
    Rational subtotal = kernel * pairs;
    out.by_class[v] += subtotal;
    out.pairs_by_class[v] += pairs;
    out.total += subtotal;
    out.rows.push_back({v, std::move(params), pairs, std::move(subtotal)});
  };
  auto hp = [&](int e) { return pow(half, static_cast<unsigned long>(e)); };

  add(PairVariant::kDisjoint, "", census.disjoint, Rational(0));
  for (int i = 0; i < census.dim; ++i) {
    for (int j = 0; j < census.dim; ++j) {
      add(PairVariant::kType1, key({{"i", i}, {"j", j}}), census.type1[static_cast<std::size_t>(i * census.dim + j)],
          -hp(i + j + 2));
    }
  }
  for (int i = 0; i < census.dim; ++i)
    for (int j = 0; j < census.dim; ++j)
      for (int k = 0; k < census.dim; ++k)
        for (int l = 0; l < census.dim; ++l)
          for (int m = 0; m < census.dim; ++m) {
            const auto count = census.type2[census.t2(i, j, k, l, m)];
            if (count == 0) continue;
            add(PairVariant::kType2, key({{"i", i}, {"j", j}, {"k", k}, {"l", l}, {"m", m}}), count,
                hp(i + j + k + l + m) - hp(i + j + 2 * k + l + m));
          }
  for (int joint = 0; joint < census.edim; ++joint) {
    for (int product = 0; product < census.edim; ++product) {
      add(PairVariant::kOtherSame, key({{"joint", joint}, {"product", product}}),
          census.same[static_cast<std::size_t>(joint * census.edim + product)], hp(joint) - hp(product));
    }
  }
  for (int product = 0; product < census.edim; ++product) {
    add(PairVariant::kOtherOpposite, key({{"product", product}}), census.opposite[static_cast<std::size_t>(product)],
        -hp(product));
  }
  return out;
}

std::string pairsum_csv(const PairSum& sum) {
  std::ostringstream os;
  os << "variant,parameters,pairs,subtotal\n";
  for (const auto& row : sum.rows) {
    os << to_string(row.variant) << ',' << row.parameters << ',' << row.pairs.get_str() << ',' << to_string(row.subtotal)
       << '\n';
  }
  return os.str();
}

BigInt count_type1(int n, int i, int j, int guard) {
  if (i < 0 || j < 0 || i + j < 1) throw_parameter("Type1 needs i, j >= 0 and i + j >= 1");
  check_guard(n, std::max(i, j) + 1, guard);
  if (i + 1 > n - 1 || j + 1 > n - 1) return 0;
  // First path: any a -> s path with i+1 edges; its last edge x -> s is
  // reused reversed as s -> x, then j more edges to b avoiding all its edges.
  BigInt total = 0;
  for_each_path(n, kVertexA, kVertexS, i + 1, [&](const std::vector<int>& va) {
    if (static_cast<int>(va.size()) != i + 2) return;
    const auto pos = positions(Path{va}, n);
    auto on_a_edge = [&](int u, int v) {
      const int pu = pos[static_cast<std::size_t>(u)], pv = pos[static_cast<std::size_t>(v)];
      return pu >= 0 && pv >= 0 && std::abs(pu - pv) == 1;
    };
    const int x = va[va.size() - 2];
    if (j == 0) {
      if (x == kVertexB) total += 1;
      return;
    }
    if (x == kVertexB) return;
    auto dfs = [&](auto&& self, int w, int left, Mask used) -> void {
      for (int v = 0; v < n; ++v) {
        if ((used & bit(v)) || on_a_edge(w, v)) continue;
        if (v == kVertexB) {
          if (left == 1) total += 1;
        } else if (left > 1) {
          self(self, v, left - 1, used | bit(v));
        }
      }
    };
    dfs(dfs, x, j, bit(kVertexS) | bit(x));
  });
  return total;
}

BigInt count_type2(int n, int i, int j, int k, int l, int m, int guard) {
  if (i < 0 || j < 0 || k < 1 || l < 1 || m < 1) throw_parameter("Type2 needs i, j >= 0 and k, l, m >= 1");
  const int len_a = i + k + l;
  const int len_b = j + k + m;
  check_guard(n, std::max(len_a, len_b), guard);
  if (len_a > n - 1 || len_b > n - 1) return 0;
  // First path a -(i)-> x -(k)-> y -(l)-> s; the second path reaches x in m
  // fresh edges, follows x..y, then leaves y with j fresh edges to b.
  BigInt total = 0;
  for_each_path(n, kVertexA, kVertexS, len_a, [&](const std::vector<int>& va) {
    if (static_cast<int>(va.size()) != len_a + 1) return;
    const auto pos = positions(Path{va}, n);
    auto on_a_edge = [&](int u, int v) {
      const int pu = pos[static_cast<std::size_t>(u)], pv = pos[static_cast<std::size_t>(v)];
      return pu >= 0 && pv >= 0 && std::abs(pu - pv) == 1;
    };
    const int x = va[static_cast<std::size_t>(i)];
    const int y = va[static_cast<std::size_t>(i + k)];
    Mask run = 0;
    for (int t = i; t <= i + k; ++t) run |= bit(va[static_cast<std::size_t>(t)]);
    // b may only appear as the final vertex of the second path.
    if ((run & bit(kVertexB)) && !(j == 0 && y == kVertexB)) return;
    if (j == 0 && y != kVertexB) return;

    auto suffix = [&](auto&& self, int w, int left, Mask used) -> void {
      for (int v = 0; v < n; ++v) {
        if ((used & bit(v)) || on_a_edge(w, v)) continue;
        if (v == kVertexB) {
          if (left == 1) total += 1;
        } else if (left > 1) {
          self(self, v, left - 1, used | bit(v));
        }
      }
    };
    auto prefix = [&](auto&& self, int w, int left, Mask used) -> void {
      for (int v = 0; v < n; ++v) {
        if (on_a_edge(w, v)) continue;
        if (v == x) {
          if (left != 1) continue;
          const Mask all = used | run;
          if (j == 0) {
            total += 1;
          } else {
            suffix(suffix, y, j, all);
          }
        } else if (left > 1 && !(used & bit(v)) && !(run & bit(v)) && v != kVertexB) {
          self(self, v, left - 1, used | bit(v));
        }
      }
    };
    if (run & bit(kVertexS)) return;
    prefix(prefix, kVertexS, m, bit(kVertexS));
  });
  return total;
}

Rational expected_paths(int n, const Rational& p, CutOff L) {
  if (n < 3) throw_parameter("n must be at least 3");
  if (p < 0 || p > 1) throw_parameter("p must lie in [0, 1]");
  const Rational half = p / 2;
  Rational total = 0;
  for (int len = 1; len <= std::min(L.length, n - 1); ++len) {
    total += falling_factorial(n - 2, static_cast<unsigned long>(len - 1)) * pow(half, static_cast<unsigned long>(len));
  }
  return total;
}

}  // namespace opl
