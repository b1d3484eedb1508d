#pragma once
#include <array>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

namespace glab {

// The three coefficient groups used by the lab. Elements are small value
// types; all operations go through the group object so the same templated
// machinery (cocycles, constrained DP, extension operators, Kesten walks)
// works for each of them.

class LatticeGroup {  // Z^d, generators +-e_i, word length = l1
 public:
  struct Element {
    std::array<int32_t, 4> v{0, 0, 0, 0};
    bool operator==(const Element&) const = default;
  };
  struct Hash {
    size_t operator()(const Element& e) const {
      uint64_t h = 1469598103934665603ull;
      for (int32_t x : e.v) {
        h ^= static_cast<uint32_t>(x);
        h *= 1099511628211ull;
      }
      return static_cast<size_t>(h);
    }
  };

  explicit LatticeGroup(int dim);
  int dim() const { return d_; }

  Element identity() const { return {}; }
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  int word_length(const Element& a) const;
  bool less(const Element& a, const Element& b) const;

  Element from_coords(const std::vector<long long>& c) const;
  std::vector<Element> ball(int radius) const;  // l1 ball, lexicographic
  static double ball_size(int dim, int radius);

  std::string to_string(const Element& a) const;  // "(1,-2)"
  Element parse(const std::string& s) const;

  using Ab = LatticeGroup;
  Ab abelianization() const { return *this; }
  Ab::Element abelianize(const Element& a) const { return a; }

 private:
  int d_;
};

class FreeGroup {  // F_k on letters a, b, c, ...; inverse letters uppercase
 public:
  struct Element {
    std::string w;  // reduced word, e.g. "abA" = a b a^{-1}
    bool operator==(const Element&) const = default;
  };
  struct Hash {
    size_t operator()(const Element& e) const {
      return std::hash<std::string>{}(e.w);
    }
  };

  explicit FreeGroup(int rank);
  int rank() const { return k_; }

  Element identity() const { return {}; }
  Element generator(int i, bool inverse = false) const;
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  int word_length(const Element& a) const { return static_cast<int>(a.w.size()); }
  bool less(const Element& a, const Element& b) const;

  std::vector<Element> ball(int radius) const;  // BFS order from identity
  static double ball_size(int rank, int radius);

  std::string to_string(const Element& a) const;  // "a^2 b^-1", identity "e"
  Element parse(const std::string& s) const;

  using Ab = LatticeGroup;
  Ab abelianization() const { return LatticeGroup(k_); }
  Ab::Element abelianize(const Element& a) const;

 private:
  int k_;
};

class CyclicGroup {  // Z/qZ, generator set {+-1}
 public:
  struct Element {
    int32_t v = 0;
    bool operator==(const Element&) const = default;
  };
  struct Hash {
    size_t operator()(const Element& e) const {
      return std::hash<int32_t>{}(e.v);
    }
  };

  explicit CyclicGroup(int order);
  int order() const { return q_; }

  Element identity() const { return {}; }
  Element mul(const Element& a, const Element& b) const {
    return {static_cast<int32_t>((a.v + b.v) % q_)};
  }
  Element inv(const Element& a) const {
    return {static_cast<int32_t>((q_ - a.v) % q_)};
  }
  int word_length(const Element& a) const {
    return static_cast<int>(a.v < q_ - a.v ? a.v : q_ - a.v);
  }
  bool less(const Element& a, const Element& b) const { return a.v < b.v; }

  std::vector<Element> ball(int radius) const;
  static double ball_size(int order, int radius);

  std::string to_string(const Element& a) const { return std::to_string(a.v); }
  Element parse(const std::string& s) const;

  using Ab = CyclicGroup;
  Ab abelianization() const { return *this; }
  Ab::Element abelianize(const Element& a) const { return a; }

 private:
  int q_;
};

template <class G>
concept GroupLike = requires(const G& g, const typename G::Element& x) {
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.mul(x, x) } -> std::same_as<typename G::Element>;
  { g.inv(x) } -> std::same_as<typename G::Element>;
  { g.word_length(x) } -> std::convertible_to<int>;
  { g.less(x, x) } -> std::convertible_to<bool>;
  { g.to_string(x) } -> std::convertible_to<std::string>;
  typename G::Hash;
};

}  // namespace glab
