#include "freemoments/nc_lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "freemoments/error.hpp"

namespace freemoments {

namespace {

constexpr int kMaxGroundSet = 255;

std::vector<std::uint8_t> canonical_labels(const std::vector<int>& raw) {
  std::vector<int> remap(raw.size(), -1);
  std::vector<std::uint8_t> out(raw.size());
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    int& id = remap.at(static_cast<std::size_t>(raw[i]));
    if (id < 0) id = next++;
    out[i] = static_cast<std::uint8_t>(id);
  }
  return out;
}

std::vector<int> flat_key(const NCPartition& p) {
  std::vector<int> key;
  for (const auto& block : p.blocks()) {
    key.insert(key.end(), block.begin(), block.end());
    key.push_back(0);
  }
  return key;
}

// Restriction of p to the elements of `subset` (sorted), relabelled 1..|subset|.
SetPartition restrict_to(const SetPartition& p, const std::vector<int>& subset) {
  std::vector<int> raw;
  raw.reserve(subset.size());
  for (int e : subset) raw.push_back(p.label(e));
  // Labels of p are < n, so they index the remap table directly.
  std::vector<int> remap(static_cast<std::size_t>(p.n()), -1);
  std::vector<std::uint8_t> labels(raw.size());
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    int& id = remap[static_cast<std::size_t>(raw[i])];
    if (id < 0) id = next++;
    labels[i] = static_cast<std::uint8_t>(id);
  }
  return SetPartition::from_labels(std::move(labels));
}

}  // namespace

int enumeration_ceiling() {
  int ceiling = kDefaultMaxN;
  if (const char* env = std::getenv("FREEMOMENTS_MAX_N"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && value > 0 && value <= kMaxGroundSet) {
      ceiling = std::max(ceiling, static_cast<int>(value));
    }
  }
  return ceiling;
}

// ---------------------------------------------------------------- SetPartition

SetPartition SetPartition::from_blocks(int n, const Blocks& blocks) {
  if (n < 1 || n > kMaxGroundSet) {
    throw Error(ErrorCode::validation, "ground set size must be in [1, 255], got " + std::to_string(n));
  }
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::validation, "empty block");
    for (int e : blocks[b]) {
      if (e < 1 || e > n) {
        throw Error(ErrorCode::validation, "element " + std::to_string(e) + " outside {1.." + std::to_string(n) + "}");
      }
      int& slot = owner[static_cast<std::size_t>(e - 1)];
      if (slot >= 0) throw Error(ErrorCode::validation, "element " + std::to_string(e) + " appears twice");
      slot = static_cast<int>(b);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (owner[static_cast<std::size_t>(i)] < 0) {
      throw Error(ErrorCode::validation, "element " + std::to_string(i + 1) + " not covered");
    }
  }
  return from_labels(canonical_labels(owner));
}

SetPartition SetPartition::from_labels(std::vector<std::uint8_t> labels) {
  if (labels.empty() || labels.size() > kMaxGroundSet) {
    throw Error(ErrorCode::validation, "ground set size must be in [1, 255]");
  }
  int top = -1;
  for (auto l : labels) {
    if (static_cast<int>(l) > top + 1) throw Error(ErrorCode::validation, "labels are not a restricted growth string");
    top = std::max(top, static_cast<int>(l));
  }
  return SetPartition(std::move(labels), top + 1);
}

SetPartition SetPartition::discrete(int n) {
  if (n < 1 || n > kMaxGroundSet) throw Error(ErrorCode::validation, "ground set size must be in [1, 255]");
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), std::uint8_t{0});
  return SetPartition(std::move(labels), n);
}

SetPartition SetPartition::full(int n) {
  if (n < 1 || n > kMaxGroundSet) throw Error(ErrorCode::validation, "ground set size must be in [1, 255]");
  return SetPartition(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 1);
}

Blocks SetPartition::blocks() const {
  Blocks out(static_cast<std::size_t>(blocks_));
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(static_cast<int>(i) + 1);
  return out;
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(blocks_), 0);
  for (auto l : labels_) ++sizes[l];
  return sizes;
}

bool SetPartition::refines(const SetPartition& coarser) const {
  if (coarser.n() != n()) return false;
  std::vector<int> image(static_cast<std::size_t>(blocks_), -1);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int& slot = image[labels_[i]];
    if (slot < 0) {
      slot = coarser.labels_[i];
    } else if (slot != coarser.labels_[i]) {
      return false;
    }
  }
  return true;
}

// ------------------------------------------------------------------ predicates

bool is_noncrossing(const SetPartition& p) {
  // For consecutive elements a < b of one block, every element strictly
  // between them must belong to a block contained in (a, b).
  const int n = p.n();
  const int k = p.block_count();
  std::vector<int> lo(static_cast<std::size_t>(k), n + 1);
  std::vector<int> hi(static_cast<std::size_t>(k), 0);
  for (int i = 1; i <= n; ++i) {
    const auto b = static_cast<std::size_t>(p.label(i));
    lo[b] = std::min(lo[b], i);
    hi[b] = std::max(hi[b], i);
  }
  std::vector<int> last(static_cast<std::size_t>(k), 0);
  for (int b_elem = 1; b_elem <= n; ++b_elem) {
    const auto b = static_cast<std::size_t>(p.label(b_elem));
    const int a = last[b];
    last[b] = b_elem;
    if (a == 0) continue;
    for (int mid = a + 1; mid < b_elem; ++mid) {
      const auto c = static_cast<std::size_t>(p.label(mid));
      if (lo[c] < a || hi[c] > b_elem) return false;
    }
  }
  return true;
}

bool is_noncrossing(int n, const Blocks& blocks) {
  return is_noncrossing(SetPartition::from_blocks(n, blocks));
}

// ----------------------------------------------------------------- NCPartition

NCPartition NCPartition::from_blocks(int n, const Blocks& blocks) {
  return from_set_partition(SetPartition::from_blocks(n, blocks));
}

NCPartition NCPartition::from_set_partition(const SetPartition& p) {
  if (!is_noncrossing(p)) throw Error(ErrorCode::validation, "partition is crossing");
  return NCPartition(p);
}

bool canonical_less(const NCPartition& a, const NCPartition& b) {
  return flat_key(a) < flat_key(b);
}

std::vector<NCPartition> enumerate_nc(int n, std::optional<int> ceiling) {
  const int limit = ceiling.value_or(enumeration_ceiling());
  if (n < 1 || n > limit) {
    throw Error(ErrorCode::size_limit,
                "enumerate_nc: n = " + std::to_string(n) + " outside [1, " + std::to_string(limit) + "]");
  }
  // Blocks are opened in order of least element. The open block may either be
  // closed (the terminator sorts before any element) or extended by the next
  // unassigned elements up to the first assigned one: jumping an assigned
  // element would cross the block that owns it.
  std::vector<NCPartition> out;
  out.reserve(static_cast<std::size_t>(catalan(static_cast<unsigned>(n)).get_ui()));
  std::vector<int> label(static_cast<std::size_t>(n) + 1, -1);

  auto emit = [&] {
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) labels[static_cast<std::size_t>(i - 1)] = static_cast<std::uint8_t>(label[static_cast<std::size_t>(i)]);
    out.push_back(NCPartition(SetPartition::from_labels(std::move(labels))));
  };

  auto dfs = [&](auto&& self, int block, int last) -> void {
    // Close the current block; the smallest unassigned element opens the next.
    int first_free = 0;
    for (int i = 1; i <= n; ++i) {
      if (label[static_cast<std::size_t>(i)] < 0) {
        first_free = i;
        break;
      }
    }
    if (first_free == 0) {
      emit();
    } else {
      label[static_cast<std::size_t>(first_free)] = block + 1;
      self(self, block + 1, first_free);
      label[static_cast<std::size_t>(first_free)] = -1;
    }
    // Extend the current block.
    for (int e = last + 1; e <= n && label[static_cast<std::size_t>(e)] < 0; ++e) {
      label[static_cast<std::size_t>(e)] = block;
      self(self, block, e);
      label[static_cast<std::size_t>(e)] = -1;
    }
  };

  label[1] = 0;
  dfs(dfs, 0, 1);
  return out;
}

std::vector<SetPartition> enumerate_set_partitions(int n) {
  if (n < 1 || n > kMaxGroundSet) throw Error(ErrorCode::size_limit, "enumerate_set_partitions: bad n");
  std::vector<SetPartition> out;
  std::vector<std::uint8_t> rgs(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int top) -> void {
    if (i == n) {
      out.push_back(SetPartition::from_labels(rgs));
      return;
    }
    for (int v = 0; v <= top + 1; ++v) {
      rgs[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
      self(self, i + 1, std::max(top, v));
    }
  };
  rec(rec, 1, 0);
  return out;
}

NCPartition kreweras_complement(const NCPartition& p) {
  const int n = p.n();
  // prev[i]: the cyclic predecessor of i inside its block.
  std::vector<int> prev(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& block : p.blocks()) {
    for (std::size_t j = 0; j < block.size(); ++j) {
      const int pred = block[(j + block.size() - 1) % block.size()];
      prev[static_cast<std::size_t>(block[j])] = pred;
    }
  }
  // sigma = pi^{-1} gamma : i -> prev(i + 1 mod n)
  std::vector<int> sigma(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) sigma[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i % n + 1)];
  std::vector<int> cycle(static_cast<std::size_t>(n), -1);
  int id = 0;
  for (int i = 1; i <= n; ++i) {
    if (cycle[static_cast<std::size_t>(i - 1)] >= 0) continue;
    for (int j = i; cycle[static_cast<std::size_t>(j - 1)] < 0; j = sigma[static_cast<std::size_t>(j)]) {
      cycle[static_cast<std::size_t>(j - 1)] = id;
    }
    ++id;
  }
  return NCPartition::from_set_partition(SetPartition::from_labels(canonical_labels(cycle)));
}

// -------------------------------------------------------------------- Moebius

NCInterval::NCInterval(NCPartition lower_, NCPartition upper_)
    : lower(std::move(lower_)), upper(std::move(upper_)) {
  if (lower.n() != upper.n() || !lower.refines(upper)) {
    throw Error(ErrorCode::invalid_interval, "lower partition does not refine upper partition");
  }
}

Integer mobius_full_nc(int k) {
  if (k < 1) throw Error(ErrorCode::validation, "mobius_full_nc: k must be positive");
  Integer value = catalan(static_cast<unsigned>(k - 1));
  return (k % 2 == 1) ? value : Integer(-value);
}

Integer mobius_nc(const NCInterval& interval) {
  Integer result = 1;
  for (const auto& block : interval.upper.blocks()) {
    const SetPartition local = restrict_to(interval.lower.as_set_partition(), block);
    const NCPartition complement = kreweras_complement(NCPartition::from_set_partition(local));
    for (int size : complement.block_sizes()) result *= mobius_full_nc(size);
  }
  return result;
}

Integer mobius_nc_poset(const NCInterval& interval) {
  const int n = interval.lower.n();
  std::vector<NCPartition> between;
  for (auto& z : enumerate_nc(n, std::max(n, enumeration_ceiling()))) {
    if (interval.lower.refines(z) && z.refines(interval.upper)) between.push_back(std::move(z));
  }
  // Finer partitions (more blocks) first gives a linear extension.
  std::stable_sort(between.begin(), between.end(), [](const NCPartition& a, const NCPartition& b) {
    return a.block_count() > b.block_count();
  });
  std::vector<Integer> mu(between.size());
  for (std::size_t y = 0; y < between.size(); ++y) {
    if (y == 0) {
      mu[0] = 1;  // between[0] is the lower end: it has the most blocks.
      continue;
    }
    Integer sum = 0;
    for (std::size_t z = 0; z < y; ++z) {
      if (between[z].refines(between[y])) sum += mu[z];
    }
    mu[y] = -sum;
  }
  for (std::size_t y = 0; y < between.size(); ++y) {
    if (between[y] == interval.upper) return mu[y];
  }
  throw Error(ErrorCode::invalid_interval, "upper partition not found in interval");
}

MobiusTable mobius_table_poset(int n) {
  MobiusTable table;
  table.elements = enumerate_nc(n);
  const std::size_t count = table.elements.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.elements[a].block_count() > table.elements[b].block_count();
  });
  std::vector<std::vector<char>> leq(count, std::vector<char>(count, 0));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) leq[a][b] = table.elements[a].refines(table.elements[b]) ? 1 : 0;
  }
  table.values.assign(count, std::vector<std::optional<Integer>>(count));
  std::vector<long long> mu(count);
  for (std::size_t xi = 0; xi < count; ++xi) {
    const std::size_t x = order[xi];
    std::fill(mu.begin(), mu.end(), 0);
    mu[x] = 1;
    table.values[x][x] = Integer(1);
    for (std::size_t yi = xi + 1; yi < count; ++yi) {
      const std::size_t y = order[yi];
      if (!leq[x][y] || y == x) continue;
      long long sum = 0;
      for (std::size_t zi = xi; zi < yi; ++zi) {
        const std::size_t z = order[zi];
        if (leq[x][z] && leq[z][y]) sum += mu[z];
      }
      mu[y] = -sum;
      table.values[x][y] = Integer(static_cast<long>(-sum));
    }
  }
  return table;
}

}  // namespace freemoments
