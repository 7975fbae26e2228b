#include "qjd/statespace.hpp"

#include <sstream>
#include <stdexcept>

namespace qjd {

namespace {

void write_list(std::ostream& os, const std::vector<int>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
}

std::vector<int> read_list(std::string_view body) {
  std::vector<int> out;
  std::string cur;
  for (char c : body) {
    if (c == ',') {
      out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

bool monotone(const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) return false;
    if (i > 0 && v[i] < v[i - 1]) return false;
  }
  return true;
}

void sequences(int len, int lo, int K, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int k = lo; k <= K; ++k) {
    cur.push_back(k);
    sequences(len, k, K, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> monotone_sequences(int len, int K) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  sequences(len, 1, K, cur, out);
  return out;
}

}  // namespace

std::string to_string(const State& s) {
  std::ostringstream os;
  os << "N=" << s.capacity << ";+";
  write_list(os, s.plus);
  os << ";-";
  write_list(os, s.minus);
  os << ";z=" << s.zeros();
  return os.str();
}

State parse_state(std::string_view text) {
  State s;
  std::string str(text);
  auto fail = [&] { return ParameterError("malformed state: " + str); };
  auto semi1 = str.find(';');
  auto semi2 = str.find(';', semi1 + 1);
  auto semi3 = str.find(';', semi2 + 1);
  if (str.rfind("N=", 0) != 0 || semi3 == std::string::npos) throw fail();
  try {
    s.capacity = std::stoi(str.substr(2, semi1 - 2));
    auto plus = str.substr(semi1 + 1, semi2 - semi1 - 1);
    auto minus = str.substr(semi2 + 1, semi3 - semi2 - 1);
    if (plus.size() < 3 || plus.substr(0, 2) != "+[" || plus.back() != ']') throw fail();
    if (minus.size() < 3 || minus.substr(0, 2) != "-[" || minus.back() != ']') throw fail();
    s.plus = read_list(std::string_view(plus).substr(2, plus.size() - 3));
    s.minus = read_list(std::string_view(minus).substr(2, minus.size() - 3));
    auto z = str.substr(semi3 + 1);
    if (z.rfind("z=", 0) != 0 || std::stoi(z.substr(2)) != s.zeros()) throw fail();
  } catch (const std::logic_error&) {
    throw fail();
  }
  if (!is_admissible(s)) throw ParameterError("state is not admissible: " + str);
  return s;
}

std::vector<Scalar> Coordinates::all() const {
  std::vector<Scalar> out(plus);
  out.insert(out.end(), minus.begin(), minus.end());
  out.resize(out.size() + static_cast<std::size_t>(zeros), Scalar(0));
  return out;
}

Coordinates coords_of(const State& s, const Params& p) {
  Coordinates c;
  Scalar tp = 1;
  for (int k : s.plus) {
    c.plus.push_back(ipow(p.q, k) * tp / p.a);
    tp *= p.t;
  }
  tp = 1;
  for (int l : s.minus) {
    c.minus.push_back(ipow(p.q, l) * tp / p.b);
    tp *= p.t;
  }
  c.zeros = s.zeros();
  return c;
}

std::vector<long double> coords_long_double(const State& s, const Params& p) {
  auto all = coords_of(s, p).all();
  std::vector<long double> out;
  out.reserve(all.size());
  for (const auto& v : all) out.push_back(to_long_double(v));
  return out;
}

bool is_admissible(const State& s) {
  return s.capacity >= 0 && monotone(s.plus) && monotone(s.minus) && s.particles() <= s.capacity;
}

std::vector<State> enumerate_sector(int m_plus, int m_minus, int K) {
  std::vector<State> out;
  const auto ps = monotone_sequences(m_plus, K);
  const auto ms = monotone_sequences(m_minus, K);
  for (const auto& a : ps)
    for (const auto& b : ms) out.push_back(State{m_plus + m_minus, a, b});
  return out;
}

std::vector<State> enumerate_truncated(int nvars, int K) {
  if (nvars < 1 || K < 1) throw std::invalid_argument("enumerate_truncated requires N >= 1 and K >= 1");
  std::vector<State> out;
  for (int n = 0; n <= nvars; ++n)
    for (int mp = n; mp >= 0; --mp)
      for (auto s : enumerate_sector(mp, n - mp, K)) {
        s.capacity = nvars;
        out.push_back(std::move(s));
      }
  return out;
}

bool on_frontier(const State& s, int K) {
  for (int k : s.plus)
    if (k >= K) return true;
  for (int l : s.minus)
    if (l >= K) return true;
  return false;
}

std::vector<Move> jump_targets(const State& s) {
  std::vector<Move> out;
  auto side_moves = [&](Side side) {
    const auto& v = side == Side::plus ? s.plus : s.minus;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (Direction dir : {Direction::up, Direction::down}) {
        State next = s;
        auto& w = side == Side::plus ? next.plus : next.minus;
        w[i] += dir == Direction::up ? 1 : -1;
        if (is_admissible(next)) out.push_back(Move{std::move(next), side, static_cast<int>(i), dir});
      }
    }
  };
  side_moves(Side::plus);
  side_moves(Side::minus);
  return out;
}

}  // namespace qjd
