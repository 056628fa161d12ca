#include "bnswarm/bn.hpp"

#include <numbers>
#include <sstream>

#include "bnswarm/rng.hpp"

namespace bnswarm {

namespace {

int checked_size(int size) {
  if (size < 4 || size > 64 || size % 2 != 0) {
    throw std::invalid_argument("network size must be even and in [4, 64], got " +
                                std::to_string(size));
  }
  return size;
}

void check_entry(std::uint8_t value, const char* what) {
  if (value > 2) {
    throw std::invalid_argument(std::string(what) + " entry out of range: " +
                                std::to_string(int(value)));
  }
}

}  // namespace

BooleanNetwork::BooleanNetwork(int size, std::vector<std::uint8_t> connections,
                               std::vector<std::uint8_t> gates,
                               std::vector<std::uint8_t> states)
    : n_(checked_size(size)),
      connections_(std::move(connections)),
      gates_(std::move(gates)),
      states_(std::move(states)) {
  const std::size_t n = static_cast<std::size_t>(n_);
  if (connections_.size() != n * n) {
    throw std::invalid_argument("connection matrix must have N*N entries");
  }
  if (gates_.size() != n * (n - 1)) {
    throw std::invalid_argument("gate matrix must have N*(N-1) entries");
  }
  if (states_.size() != n) {
    throw std::invalid_argument("state vector must have N entries");
  }
  for (auto c : connections_) check_entry(c, "connection");
  for (auto g : gates_) check_entry(g, "gate");
  for (auto& s : states_) {
    if (s > 1) throw std::invalid_argument("state bits must be 0 or 1");
    s = s ? 1 : 0;
  }
}

BooleanNetwork BooleanNetwork::random(int size, std::uint64_t seed) {
  checked_size(size);
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(size);
  std::vector<std::uint8_t> connections(n * n);
  std::vector<std::uint8_t> gates(n * (n - 1));
  std::vector<std::uint8_t> states(n);
  for (auto& c : connections) c = static_cast<std::uint8_t>(rng.below(3));
  for (auto& g : gates) g = static_cast<std::uint8_t>(rng.below(3));
  for (auto& s : states) s = static_cast<std::uint8_t>(rng.below(2));
  return BooleanNetwork(size, std::move(connections), std::move(gates),
                        std::move(states));
}

void BooleanNetwork::set_connection(int node, int source, std::uint8_t value) {
  check_entry(value, "connection");
  connections_[static_cast<std::size_t>(node) * n_ + source] = value;
  plan_valid_ = false;
}

void BooleanNetwork::set_gate(int node, int slot, std::uint8_t value) {
  check_entry(value, "gate");
  gates_[static_cast<std::size_t>(node) * (n_ - 1) + slot] = value;
  plan_valid_ = false;
}

void BooleanNetwork::set_states(const std::vector<std::uint8_t>& states) {
  if (states.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("state vector must have N entries");
  }
  for (auto s : states) {
    if (s > 1) throw std::invalid_argument("state bits must be 0 or 1");
  }
  states_ = states;
}

int BooleanNetwork::in_degree(int node) const {
  int k = 0;
  for (int j = 0; j < n_; ++j) k += connection(node, j) != 0;
  return k;
}

void BooleanNetwork::ensure_plan() const {
  if (plan_valid_) return;
  plan_inputs_.clear();
  plan_gates_.clear();
  plan_input_off_.assign(1, 0);
  plan_gate_off_.assign(1, 0);
  for (int i = 0; i < n_; ++i) {
    int k = 0;
    for (int j = 0; j < n_; ++j) {
      const std::uint8_t c = connection(i, j);
      if (c == 0) continue;
      plan_inputs_.push_back(static_cast<std::uint32_t>(j) << 1 | (c == 2));
      ++k;
    }
    for (int slot = 0; slot + 1 < k; ++slot) plan_gates_.push_back(gate(i, slot));
    plan_input_off_.push_back(static_cast<std::uint32_t>(plan_inputs_.size()));
    plan_gate_off_.push_back(static_cast<std::uint32_t>(plan_gates_.size()));
  }
  plan_valid_ = true;
}

void BooleanNetwork::step() {
  ensure_plan();
  scratch_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    const std::uint32_t begin = plan_input_off_[i];
    const std::uint32_t end = plan_input_off_[i + 1];
    if (begin == end) {
      scratch_[i] = states_[i];
      continue;
    }
    std::uint8_t acc = states_[plan_inputs_[begin] >> 1] ^ (plan_inputs_[begin] & 1);
    std::uint32_t g = plan_gate_off_[i];
    for (std::uint32_t t = begin + 1; t < end; ++t, ++g) {
      const std::uint8_t v = states_[plan_inputs_[t] >> 1] ^ (plan_inputs_[t] & 1);
      switch (plan_gates_[g]) {
        case 0: acc = acc & v; break;
        case 1: acc = acc | v; break;
        default: acc = acc ^ v; break;
      }
    }
    scratch_[i] = acc;
  }
  states_.swap(scratch_);
}

std::uint64_t BooleanNetwork::states_packed() const noexcept {
  std::uint64_t bits = 0;
  for (int i = 0; i < n_; ++i) bits |= std::uint64_t{states_[i]} << i;
  return bits;
}

void BooleanNetwork::set_states_packed(std::uint64_t bits) noexcept {
  for (int i = 0; i < n_; ++i) states_[i] = (bits >> i) & 1;
}

std::uint64_t BooleanNetwork::step_packed(std::uint64_t bits) const {
  ensure_plan();
  std::uint64_t out = 0;
  for (int i = 0; i < n_; ++i) {
    const std::uint32_t begin = plan_input_off_[i];
    const std::uint32_t end = plan_input_off_[i + 1];
    std::uint64_t acc;
    if (begin == end) {
      acc = (bits >> i) & 1;
    } else {
      acc = ((bits >> (plan_inputs_[begin] >> 1)) ^ plan_inputs_[begin]) & 1;
      std::uint32_t g = plan_gate_off_[i];
      for (std::uint32_t t = begin + 1; t < end; ++t, ++g) {
        const std::uint64_t v = ((bits >> (plan_inputs_[t] >> 1)) ^ plan_inputs_[t]) & 1;
        switch (plan_gates_[g]) {
          case 0: acc = acc & v; break;
          case 1: acc = acc | v; break;
          default: acc = acc ^ v; break;
        }
      }
    }
    out |= acc << i;
  }
  return out;
}

MotionCommand BooleanNetwork::decode_motion() const {
  const int half = n_ / 2;
  std::uint64_t run = 0;
  std::uint64_t turn = 0;
  for (int i = 0; i < half; ++i) run = run << 1 | states_[i];
  for (int i = half; i < n_; ++i) turn = turn << 1 | states_[i];
  // Denominator 2^(N/2)-1 so the all-zeros and all-ones halves land exactly
  // on -pi and +pi.
  const double span = static_cast<double>((std::uint64_t{1} << half) - 1);
  const double angle =
      -std::numbers::pi + 2.0 * std::numbers::pi * (static_cast<double>(turn) / span);
  return MotionCommand{static_cast<std::int64_t>(run), angle};
}

std::string BooleanNetwork::serialize() const {
  std::ostringstream out;
  out << "bn " << n_ << '\n';
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j) out << ' ';
      out << int(connection(i, j));
    }
    out << '\n';
  }
  for (int i = 0; i < n_; ++i) {
    for (int slot = 0; slot < n_ - 1; ++slot) {
      if (slot) out << ' ';
      out << int(gate(i, slot));
    }
    out << '\n';
  }
  for (int i = 0; i < n_; ++i) out << int(states_[i]);
  out << '\n';
  return out.str();
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

std::vector<std::uint8_t> parse_digit_row(const std::string& line, int line_no,
                                          int expected, const char* what) {
  std::istringstream in(line);
  std::vector<std::uint8_t> row;
  std::string token;
  while (in >> token) {
    if (token.size() != 1 || token[0] < '0' || token[0] > '2') {
      throw ParseError(line_no, std::string(what) + " entry " +
                                    std::to_string(row.size() + 1) +
                                    " must be 0, 1 or 2, got '" + token + "'");
    }
    row.push_back(static_cast<std::uint8_t>(token[0] - '0'));
  }
  if (static_cast<int>(row.size()) != expected) {
    throw ParseError(line_no, std::string(what) + " row has " +
                                  std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(expected));
  }
  return row;
}

}  // namespace

BooleanNetwork BooleanNetwork::deserialize(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty input, expected header 'bn <N>'");

  std::istringstream header(lines[0]);
  std::string tag;
  int n = 0;
  if (!(header >> tag >> n) || tag != "bn") {
    throw ParseError(1, "expected header 'bn <N>', got '" + lines[0] + "'");
  }
  std::string trailing;
  if (header >> trailing) throw ParseError(1, "unexpected text after header");
  if (n < 4 || n > 64 || n % 2 != 0) {
    throw ParseError(1, "network size must be even and in [4, 64], got " +
                            std::to_string(n));
  }

  const int expected_lines = 1 + n + n + 1;
  if (static_cast<int>(lines.size()) < expected_lines) {
    throw ParseError(static_cast<int>(lines.size()) + 1,
                     "truncated input: expected " + std::to_string(expected_lines) +
                         " lines for N=" + std::to_string(n));
  }

  std::vector<std::uint8_t> connections;
  std::vector<std::uint8_t> gates;
  connections.reserve(static_cast<std::size_t>(n) * n);
  gates.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    auto row = parse_digit_row(lines[1 + i], 2 + i, n, "connection");
    connections.insert(connections.end(), row.begin(), row.end());
  }
  for (int i = 0; i < n; ++i) {
    auto row = parse_digit_row(lines[1 + n + i], 2 + n + i, n - 1, "gate");
    gates.insert(gates.end(), row.begin(), row.end());
  }

  const int state_line_no = 2 + 2 * n;
  std::string bits;
  for (char ch : lines[state_line_no - 1]) {
    if (ch == ' ' || ch == '\t') continue;
    bits.push_back(ch);
  }
  if (static_cast<int>(bits.size()) != n) {
    throw ParseError(state_line_no, "state line has " + std::to_string(bits.size()) +
                                        " bits, expected " + std::to_string(n));
  }
  std::vector<std::uint8_t> states(n);
  for (int i = 0; i < n; ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ParseError(state_line_no, std::string("state bit ") + std::to_string(i + 1) +
                                          " must be 0 or 1, got '" + bits[i] + "'");
    }
    states[i] = bits[i] == '1';
  }

  for (std::size_t extra = expected_lines; extra < lines.size(); ++extra) {
    if (!lines[extra].empty()) {
      throw ParseError(static_cast<int>(extra) + 1, "unexpected trailing content");
    }
  }
  return BooleanNetwork(n, std::move(connections), std::move(gates), std::move(states));
}

}  // namespace bnswarm
