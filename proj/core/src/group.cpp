#include "glab/group.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace glab {

LatticeGroup::LatticeGroup(int dim) : d_(dim) {
  if (dim < 1 || dim > 4)
    throw std::invalid_argument("lattice group: dimension must be in [1,4]");
}

LatticeGroup::Element LatticeGroup::mul(const Element& a, const Element& b) const {
  Element r;
  for (int i = 0; i < d_; ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

LatticeGroup::Element LatticeGroup::inv(const Element& a) const {
  Element r;
  for (int i = 0; i < d_; ++i) r.v[i] = -a.v[i];
  return r;
}

int LatticeGroup::word_length(const Element& a) const {
  int l = 0;
  for (int i = 0; i < d_; ++i) l += a.v[i] < 0 ? -a.v[i] : a.v[i];
  return l;
}

bool LatticeGroup::less(const Element& a, const Element& b) const {
  for (int i = 0; i < d_; ++i)
    if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
  return false;
}

LatticeGroup::Element LatticeGroup::from_coords(
    const std::vector<long long>& c) const {
  if (static_cast<int>(c.size()) != d_)
    throw std::invalid_argument("lattice group: coordinate count mismatch");
  Element e;
  for (int i = 0; i < d_; ++i) e.v[i] = static_cast<int32_t>(c[i]);
  return e;
}

std::vector<LatticeGroup::Element> LatticeGroup::ball(int radius) const {
  std::vector<Element> out;
  Element cur;
  auto rec = [&](auto&& self, int coord, int budget) -> void {
    if (coord == d_) {
      out.push_back(cur);
      return;
    }
    for (int x = -budget; x <= budget; ++x) {
      cur.v[coord] = x;
      self(self, coord + 1, budget - (x < 0 ? -x : x));
    }
    cur.v[coord] = 0;
  };
  rec(rec, 0, radius);
  return out;
}

double LatticeGroup::ball_size(int dim, int radius) {
  // N(d, L) = sum_j N(d-1, L - |j|), N(0, L) = 1.
  std::vector<double> n(radius + 1, 1.0);
  for (int d = 1; d <= dim; ++d) {
    std::vector<double> m(radius + 1, 0.0);
    for (int l = 0; l <= radius; ++l) {
      m[l] = n[l];  // j = 0
      for (int j = 1; j <= l; ++j) m[l] += 2.0 * n[l - j];
    }
    n = std::move(m);
  }
  return n[radius];
}

std::string LatticeGroup::to_string(const Element& a) const {
  std::string s = "(";
  for (int i = 0; i < d_; ++i) {
    if (i) s += ",";
    s += std::to_string(a.v[i]);
  }
  return s + ")";
}

LatticeGroup::Element LatticeGroup::parse(const std::string& s) const {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')')
      t += c;
  Element e;
  int coord = 0;
  size_t pos = 0;
  while (pos <= t.size()) {
    size_t comma = t.find(',', pos);
    std::string piece =
        comma == std::string::npos ? t.substr(pos) : t.substr(pos, comma - pos);
    if (piece.empty()) throw std::invalid_argument("lattice parse: empty coordinate");
    if (coord >= d_)
      throw std::invalid_argument("lattice parse: expected " +
                                  std::to_string(d_) + " coordinates in '" + s +
                                  "'");
    size_t used = 0;
    int v = std::stoi(piece, &used);
    if (used != piece.size())
      throw std::invalid_argument("lattice parse: bad coordinate '" + piece + "'");
    e.v[coord++] = v;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (coord != d_)
    throw std::invalid_argument("lattice parse: expected " + std::to_string(d_) +
                                " coordinates in '" + s + "'");
  return e;
}

namespace {

inline bool cancels(char a, char b) {
  return a != b && std::toupper(static_cast<unsigned char>(a)) ==
                       std::toupper(static_cast<unsigned char>(b));
}

}  // namespace

FreeGroup::FreeGroup(int rank) : k_(rank) {
  // Letters a..d; the cap also keeps the abelianization inside the lattice
  // element width and the letter 'e' free to denote the identity.
  if (rank < 1 || rank > 4)
    throw std::invalid_argument("free group: rank must be in [1,4]");
}

FreeGroup::Element FreeGroup::generator(int i, bool inverse) const {
  if (i < 0 || i >= k_) throw std::invalid_argument("free group: no such generator");
  return {std::string(1, static_cast<char>((inverse ? 'A' : 'a') + i))};
}

FreeGroup::Element FreeGroup::mul(const Element& a, const Element& b) const {
  size_t i = a.w.size(), j = 0;
  while (i > 0 && j < b.w.size() && cancels(a.w[i - 1], b.w[j])) {
    --i;
    ++j;
  }
  Element r;
  r.w.reserve(i + b.w.size() - j);
  r.w.append(a.w, 0, i);
  r.w.append(b.w, j, std::string::npos);
  return r;
}

FreeGroup::Element FreeGroup::inv(const Element& a) const {
  Element r;
  r.w.reserve(a.w.size());
  for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) {
    char c = *it;
    r.w += std::isupper(static_cast<unsigned char>(c))
               ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
               : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return r;
}

bool FreeGroup::less(const Element& a, const Element& b) const {
  if (a.w.size() != b.w.size()) return a.w.size() < b.w.size();
  return a.w < b.w;
}

std::vector<FreeGroup::Element> FreeGroup::ball(int radius) const {
  // Letters in expansion order: a, A, b, B, ...
  std::string letters;
  for (int i = 0; i < k_; ++i) {
    letters += static_cast<char>('a' + i);
    letters += static_cast<char>('A' + i);
  }
  std::vector<Element> out{identity()};
  size_t level_start = 0;
  for (int l = 1; l <= radius; ++l) {
    size_t level_end = out.size();
    for (size_t i = level_start; i < level_end; ++i)
      for (char c : letters) {
        const std::string& w = out[i].w;
        if (!w.empty() && cancels(w.back(), c)) continue;
        out.push_back({w + c});
      }
    level_start = level_end;
  }
  return out;
}

double FreeGroup::ball_size(int rank, int radius) {
  double total = 1.0, sphere = 2.0 * rank;
  for (int l = 1; l <= radius; ++l) {
    total += sphere;
    sphere *= 2.0 * rank - 1.0;
  }
  return total;
}

std::string FreeGroup::to_string(const Element& a) const {
  if (a.w.empty()) return "e";
  std::string s;
  size_t i = 0;
  while (i < a.w.size()) {
    size_t j = i;
    while (j < a.w.size() && a.w[j] == a.w[i]) ++j;
    char c = a.w[i];
    bool inverse = std::isupper(static_cast<unsigned char>(c));
    long long run = static_cast<long long>(j - i);
    if (!s.empty()) s += ' ';
    s += inverse ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c;
    if (inverse || run > 1) {
      s += '^';
      s += std::to_string(inverse ? -run : run);
    }
    i = j;
  }
  return s;
}

FreeGroup::Element FreeGroup::parse(const std::string& s) const {
  std::string trimmed;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  if (trimmed.empty() || trimmed == "e") return identity();
  Element acc;
  size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) break;
    char c = s[pos++];
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw std::invalid_argument("free parse: unexpected '" + std::string(1, c) + "'");
    int letter = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (letter < 0 || letter >= k_)
      throw std::invalid_argument("free parse: generator out of rank in '" + s + "'");
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    long long exp = upper ? -1 : 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      size_t used = 0;
      exp = std::stoll(s.substr(pos), &used);
      if (used == 0) throw std::invalid_argument("free parse: bad exponent in '" + s + "'");
      pos += used;
      if (upper) exp = -exp;
    }
    bool inverse = exp < 0;
    long long reps = inverse ? -exp : exp;
    for (long long r = 0; r < reps; ++r)
      acc = mul(acc, generator(letter, inverse));
  }
  return acc;
}

LatticeGroup::Element FreeGroup::abelianize(const Element& a) const {
  LatticeGroup::Element e;
  for (char c : a.w) {
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    int letter = std::tolower(static_cast<unsigned char>(c)) - 'a';
    e.v[letter] += upper ? -1 : 1;
  }
  return e;
}

CyclicGroup::CyclicGroup(int order) : q_(order) {
  if (order < 1) throw std::invalid_argument("cyclic group: order must be >= 1");
}

std::vector<CyclicGroup::Element> CyclicGroup::ball(int radius) const {
  std::vector<Element> out;
  for (int32_t v = 0; v < q_; ++v)
    if (word_length({v}) <= radius) out.push_back({v});
  return out;
}

double CyclicGroup::ball_size(int order, int radius) {
  double full = order;
  double capped = 2.0 * radius + 1.0;
  return full < capped ? full : capped;
}

CyclicGroup::Element CyclicGroup::parse(const std::string& s) const {
  size_t used = 0;
  long long v = std::stoll(s, &used);
  if (used != s.size())
    throw std::invalid_argument("cyclic parse: bad element '" + s + "'");
  long long m = ((v % q_) + q_) % q_;
  return {static_cast<int32_t>(m)};
}

}  // namespace glab
