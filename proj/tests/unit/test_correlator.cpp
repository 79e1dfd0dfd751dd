#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "cavisteady/correlator.hpp"
#include "cavisteady/perturbative.hpp"
#include "orbit_oracle.hpp"

using namespace cavisteady;

namespace {
CorrelatorIndex random_index(std::mt19937& rng, int n, int n_max) {
  std::uniform_int_distribution<int> d(0, n_max);
  std::vector<PairIndex> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = {d(rng), d(rng)};
  return CorrelatorIndex(std::move(p));
}

oracle::Seq to_seq(const CorrelatorIndex& idx) {
  oracle::Seq s;
  for (const auto& p : idx.pairs()) s.emplace_back(p.m, p.n);
  return s;
}
}  // namespace

TEST_CASE("canonicalize moves the leading pair to the front") {
  const CorrelatorIndex in{{0, 0}, {3, 0}, {4, 2}, {0, 0}};
  const CorrelatorIndex out{{4, 2}, {3, 0}, {0, 0}, {0, 0}};
  CHECK(canonicalize(in) == out);
  CHECK(is_canonical(out));
  CHECK_FALSE(is_canonical(in));
}

TEST_CASE("already canonical indices are fixed") {
  const CorrelatorIndex a{{3, 3}, {1, 3}, {0, 2}, {1, 0}};
  CHECK(canonicalize(a) == a);
  const CorrelatorIndex b{{1, 0}, {0, 0}, {0, 0}, {0, 0}};
  CHECK(canonicalize(b) == b);
}

TEST_CASE("canonicalize is idempotent and constant on orbits") {
  std::mt19937 rng(20261018);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto idx = random_index(rng, n, 3);
      const auto c = canonicalize(idx);
      CHECK(canonicalize(c) == c);
      CHECK(is_canonical(c));
      const auto images = dihedral_images(idx);
      CHECK(images.size() == static_cast<std::size_t>(2 * n));
      for (const auto& im : images) CHECK(canonicalize(im) == c);
      CHECK(c.total_order() == idx.total_order());
    }
  }
}

TEST_CASE("conjugation commutes with canonicalization up to the orbit") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto idx = random_index(rng, 4, 2);
    CHECK(canonicalize(idx.conjugate()) == canonicalize(canonicalize(idx).conjugate()));
    CHECK(idx.conjugate().conjugate() == idx);
  }
}

TEST_CASE("canonical counts") {
  CHECK(enumerate_canonical(1, 2).size() == 8);
  CHECK(enumerate_canonical(2, 2).size() == 44);
  CHECK(enumerate_canonical(4, 2).size() == 1034);
  CHECK(raw_index_count(4, 2) == 6560);
  CHECK(raw_index_count(64, 9) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("enumeration is sorted, canonical and unique") {
  const auto all = enumerate_canonical(3, 2);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(is_canonical(all[i]));
    CHECK_FALSE(all[i].is_identity());
    if (i > 0) CHECK(all[i - 1] < all[i]);
  }
}

TEST_CASE("enumeration matches a brute-force orbit census") {
  for (auto [n, n_max] : {std::pair{1, 2}, {2, 2}, {3, 2}, {4, 1}, {4, 2}, {5, 1}}) {
    CAPTURE(n);
    CAPTURE(n_max);
    const auto census = oracle::census(n, n_max);
    CHECK(census.sizes_divide_group);
    CHECK(census.covered == raw_index_count(n, n_max));
    CHECK(enumerate_canonical(n, n_max).size() == census.orbits);
  }
}

TEST_CASE("pattern partition of the four-ring") {
  const auto expected = oracle::burnside_ring4(2);
  CHECK(expected.at("a") == 8);
  CHECK(expected.at("b") == 36);
  CHECK(expected.at("c") == 288);
  CHECK(expected.at("d") == 666);
  CHECK(expected.at("e") == 36);

  const auto census = oracle::census(4, 2);
  std::map<std::string, std::size_t> ours;
  for (const auto& idx : enumerate_canonical(4, 2)) {
    const auto p = classify_pattern(idx);
    ++ours[std::string(to_string(p))];
    CHECK(std::string(to_string(p)) == oracle::geometry(to_seq(idx)));
  }
  for (const auto& [name, count] : expected) {
    CAPTURE(name);
    CHECK(ours[name] == count);
    CHECK(census.by_geometry.at(name) == count);
  }
  CHECK(ours.count("other") == 0);
}

TEST_CASE("index helpers") {
  const CorrelatorIndex idx{{0, 0}, {2, 1}, {0, 0}, {0, 3}};
  CHECK(idx.support() == std::vector<int>{1, 3});
  CHECK(idx.total_order() == 6);
  CHECK(idx.max_exponent() == 3);
  CHECK(CorrelatorIndex::identity(3).is_identity());
  CHECK(CorrelatorIndex::single(3, {1, 1}) == CorrelatorIndex{{1, 1}, {0, 0}, {0, 0}});
  CorrelatorHash h;
  CHECK(h(idx) == h(CorrelatorIndex{{0, 0}, {2, 1}, {0, 0}, {0, 3}}));
}
